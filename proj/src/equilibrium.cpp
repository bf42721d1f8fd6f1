#include "riesz/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riesz/errors.hpp"
#include "riesz/grid_convolution.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

double cd_coulomb(int d) { return d == 1 ? 2.0 : coulomb_constant(d); }

std::vector<std::vector<double>> ray_directions(int d) {
  std::vector<std::vector<double>> dirs;
  if (d == 1) return {{1.0}, {-1.0}};
  if (d == 2) {
    for (int j = 0; j < 16; ++j) {
      const double t = 2.0 * kPi * (j + 0.25) / 16.0;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  for (int a = 0; a < d; ++a) {
    std::vector<double> e(d, 0.0);
    e[a] = 1.0;
    dirs.push_back(e);
    e[a] = -1.0;
    dirs.push_back(e);
  }
  std::vector<double> diag(d, 1.0 / std::sqrt(static_cast<double>(d)));
  dirs.push_back(diag);
  return dirs;
}

}  // namespace

double potential_of_density(const Density& mu, const RieszKernel& k, std::span<const double> x) {
  return mu.potential(k, x);
}

double potential_energy(const Density& mu, const Potential& V) {
  if (V.is_radial_poly()) {
    double acc = 0.0;
    if (V.c2() != 0.0) acc += V.c2() * mu.radial_moment(2);
    if (V.c4() != 0.0) acc += V.c4() * mu.radial_moment(4);
    return acc;
  }
  const WeightedNodes q = mu.quadrature(mu.kind() == DensityKind::Gridded ? 1 : 96);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += q.weights[i] * V.value(q.point(i));
  return acc;
}

double energy_functional(const Density& mu, const Potential& V, const RieszKernel& k) {
  return 0.5 * mu.self_energy(k) + potential_energy(mu, V);
}

EquilibriumResult analytic_equilibrium(const Potential& V, const RieszKernel& k) {
  if (!V.is_pure_quadratic()) {
    throw DomainError("analytic_equilibrium: registered family is V = c2 |x|^2 with c2 > 0");
  }
  const double c2 = V.c2();
  const int d = k.d;
  const std::vector<double> origin(d, 0.0);
  EquilibriumResult out{Density::uniform_ball(d, 1.0), k, V, 0.0, 0.0, {}};
  if (k.is_coulomb()) {
    // Interior density Delta V / c_d, radius from unit mass.
    const double rho = 2.0 * d * c2 / cd_coulomb(d);
    const double vol = sphere_area(d) / d;
    const double R = std::pow(1.0 / (rho * vol), 1.0 / d);
    out.density = Density::uniform_ball(d, R);
  } else if (d == 1 && k.is_log()) {
    out.density = Density::semicircle(1.0 / std::sqrt(c2));
  } else {
    throw DomainError("analytic_equilibrium: needs a Coulomb kernel or the 1D log kernel");
  }
  out.c = out.density.potential(k, origin) + V.value(origin);
  out.energy = energy_functional(out.density, V, k);
  out.residual = el_residual(out.density, V, k, out.c);
  return out;
}

ResidualReport el_residual(const Density& mu, const Potential& V, const RieszKernel& k, double c,
                           int samples) {
  ResidualReport rep;
  rep.off_support = std::numeric_limits<double>::infinity();
  const int d = mu.dim();
  if (mu.kind() == DensityKind::Gridded) {
    const GridSpec& g = mu.grid();
    const std::vector<double>& v = mu.values();
    GridConvolver conv(g, k);
    const std::vector<double> u = conv.apply(v);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < v.size(); ++i) {
      g.node(i, x);
      const double r = u[i] + V.value(x) - c;
      if (v[i] > 0.0) {
        rep.on_support = std::max(rep.on_support, std::abs(r));
      } else {
        rep.off_support = std::min(rep.off_support, r);
      }
    }
    return rep;
  }
  const double R = mu.radius();
  const std::vector<double>& ctr = mu.center();
  std::vector<double> x(d);
  for (const auto& e : ray_directions(d)) {
    for (int j = 0; j <= samples; ++j) {
      const double r_in = R * j / samples;
      for (int a = 0; a < d; ++a) x[a] = ctr[a] + r_in * e[a];
      rep.on_support = std::max(rep.on_support, std::abs(mu.potential(k, x) + V.value(x) - c));
      if (j == 0) continue;
      const double r_out = R * (1.0 + 2.0 * j / samples);
      for (int a = 0; a < d; ++a) x[a] = ctr[a] + r_out * e[a];
      rep.off_support = std::min(rep.off_support, mu.potential(k, x) + V.value(x) - c);
    }
  }
  return rep;
}

double zeta(std::span<const double> x, const EquilibriumResult& eq, const Potential& V) {
  return eq.density.potential(eq.kernel, x) + V.value(x) - eq.c;
}

// ------------------------------------------------------------------ obstacle

Density ObstacleResult::density() const { return Density::gridded(grid, mu); }

namespace {

struct ObstacleState {
  int n;
  double h;
  std::vector<double> u, psi;
};

// Projected SOR to tolerance; returns sweeps used.
int projected_sor(ObstacleState& st, double omega, double tol, int max_sweeps, double& residual) {
  const int n = st.n;
  const double inv_h2 = 1.0 / (st.h * st.h);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  auto compute_residual = [&]() {
    double res = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; j < n - 1; ++j) {
        const std::size_t p = at(i, j);
        const double lap = (4.0 * st.u[p] - st.u[at(i - 1, j)] - st.u[at(i + 1, j)] - st.u[at(i, j - 1)] -
                            st.u[at(i, j + 1)]) * inv_h2;
        res = std::max(res, std::abs(std::min(lap, st.u[p] - st.psi[p])));
      }
    }
    return res;
  };
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; j < n - 1; ++j) {
        const std::size_t p = at(i, j);
        const double gs = 0.25 * (st.u[at(i - 1, j)] + st.u[at(i + 1, j)] + st.u[at(i, j - 1)] + st.u[at(i, j + 1)]);
        st.u[p] = std::max(st.psi[p], st.u[p] + omega * (gs - st.u[p]));
      }
    }
    if (sweep % 10 == 0) {
      residual = compute_residual();
      if (residual < tol) return sweep;
    }
  }
  residual = compute_residual();
  throw ConvergenceError("obstacle_solve: projected SOR did not converge", {residual});
}

}  // namespace

ObstacleResult obstacle_solve(const Potential& V, const ObstacleOptions& opt) {
  if (opt.n < 8) throw DomainError("obstacle_solve: grid too small");
  if (opt.omega < 1.0 || opt.omega > 1.9) throw DomainError("obstacle_solve: omega must lie in [1, 1.9]");
  const int n = opt.n;
  ObstacleResult res;
  res.grid = GridSpec::square(2, opt.half_width, n);
  const double h = res.grid.spacing;
  const std::size_t total = res.grid.size();
  std::vector<double> Vn(total);
  std::vector<double> x(2);
  ObstacleState st{n, h, std::vector<double>(total), std::vector<double>(total)};
  auto bc = [&](double a, double b) {
    if (opt.boundary) return opt.boundary(a, b);
    return -0.5 * std::log(a * a + b * b);
  };
  for (std::size_t p = 0; p < total; ++p) {
    res.grid.node(p, x);
    Vn[p] = V.value(x);
  }
  auto on_boundary = [n](std::size_t p) {
    const int i = static_cast<int>(p) / n, j = static_cast<int>(p) % n;
    return i == 0 || j == 0 || i == n - 1 || j == n - 1;
  };

  auto solve_for = [&](double c, double& mass, bool& touches) {
    for (std::size_t p = 0; p < total; ++p) {
      res.grid.node(p, x);
      if (on_boundary(p)) {
        st.psi[p] = -std::numeric_limits<double>::infinity();
        st.u[p] = bc(x[0], x[1]);
      } else {
        st.psi[p] = c - Vn[p];
        st.u[p] = std::max(st.u[p], st.psi[p]);
      }
    }
    double r = 0.0;
    res.sweeps += projected_sor(st, opt.omega, opt.tol, opt.max_sweeps, r);
    res.complementarity = r;
    mass = 0.0;
    touches = false;
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; j < n - 1; ++j) {
        const std::size_t p = static_cast<std::size_t>(i) * n + j;
        const double lap = (4.0 * st.u[p] - st.u[p - n] - st.u[p + n] - st.u[p - 1] - st.u[p + 1]) / (h * h);
        mass += lap * h * h / (2.0 * kPi);
        const bool contact = st.u[p] <= st.psi[p];
        if (contact && (i == 1 || j == 1 || i == n - 2 || j == n - 2)) touches = true;
      }
    }
  };

  // Start from the harmonic-ish guess max(psi, -log|x|) reused across the loop.
  for (std::size_t p = 0; p < total; ++p) {
    res.grid.node(p, x);
    const double r2 = std::max(x[0] * x[0] + x[1] * x[1], h * h);
    st.u[p] = opt.boundary ? 0.0 : -0.5 * std::log(r2);
  }

  double mass = 0.0;
  bool touches = false;
  if (opt.fixed_c) {
    res.c = opt.c;
    solve_for(opt.c, mass, touches);
  } else {
    // Bracket c, then bisect on the recovered mass.
    double lo = 0.0, hi = 0.0;
    solve_for(0.0, mass, touches);
    double step = 0.5;
    if (mass < 1.0 && !touches) {
      lo = 0.0;
      hi = step;
      for (;;) {
        solve_for(hi, mass, touches);
        if (mass >= 1.0 || touches) break;
        lo = hi;
        step *= 2.0;
        hi += step;
        if (step > 1e6) throw ConvergenceError("obstacle_solve: could not bracket the mass");
      }
    } else {
      hi = 0.0;
      lo = -step;
      for (;;) {
        solve_for(lo, mass, touches);
        if (mass < 1.0 && !touches) break;
        hi = lo;
        step *= 2.0;
        lo -= step;
        if (step > 1e6) throw ConvergenceError("obstacle_solve: could not bracket the mass");
      }
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      solve_for(mid, mass, touches);
      ++res.bisections;
      if (!touches && std::abs(mass - 1.0) < opt.mass_tol) break;
      if (mass < 1.0 && !touches) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-14) break;
    }
    res.c = 0.5 * (lo + hi);
    solve_for(res.c, mass, touches);
  }
  res.touches_boundary = touches;
  if (touches) {
    throw DomainError("obstacle_solve: coincidence set touches the computational box boundary");
  }

  res.h = st.u;
  res.psi = st.psi;
  res.neg_laplacian.assign(total, 0.0);
  res.coincidence.assign(total, 0);
  res.mu.assign(total, 0.0);
  res.mass = mass;
  double area = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    for (int j = 1; j < n - 1; ++j) {
      const std::size_t p = static_cast<std::size_t>(i) * n + j;
      const double lap = (4.0 * st.u[p] - st.u[p - n] - st.u[p + n] - st.u[p - 1] - st.u[p + 1]) / (h * h);
      res.neg_laplacian[p] = lap;
      if (st.u[p] <= st.psi[p]) {
        res.coincidence[p] = 1;
        res.mu[p] = std::max(0.0, lap / (2.0 * kPi));
        res.grid.node(p, x);
        res.radius_max = std::max(res.radius_max, std::hypot(x[0], x[1]));
        area += h * h;
      }
    }
  }
  res.radius_area = std::sqrt(area / kPi);
  return res;
}

// ------------------------------------------------------------------- thermal

namespace {

constexpr std::size_t kResidualWindow = 10;

struct ThermalState {
  std::vector<double> logmu;
  std::vector<double> mu;
  std::vector<double> u;
  std::vector<double> target;
  double residual = 0.0;
  double energy = 0.0;
  double c = 0.0;
};

void normalize_log(std::vector<double>& l, double vol) {
  const double mx = *std::max_element(l.begin(), l.end());
  double s = 0.0;
  for (double v : l) s += std::exp(v - mx);
  const double shift = mx + std::log(s * vol);
  for (double& v : l) v -= shift;
}

void evaluate(ThermalState& st, const GridConvolver& conv, const std::vector<double>& Vn, double theta,
              double vol) {
  const std::size_t n = st.logmu.size();
  st.mu.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.mu[i] = std::exp(st.logmu[i]);
  st.u = conv.apply(st.mu);
  st.target.resize(n);
  double e_int = 0.0, e_v = 0.0, e_s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st.target[i] = -theta * (st.u[i] + Vn[i]);
    e_int += st.mu[i] * st.u[i];
    e_v += st.mu[i] * Vn[i];
    e_s += st.mu[i] * st.logmu[i];
    c += st.mu[i] * (st.u[i] + Vn[i] + st.logmu[i] / theta);
  }
  normalize_log(st.target, vol);
  st.energy = (0.5 * e_int + e_v + e_s / theta) * vol;
  st.c = c * vol;
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(st.u[i] + Vn[i] + st.logmu[i] / theta - st.c));
  st.residual = r;
}

}  // namespace

ThermalResult thermal_equilibrium(const Potential& V, const RieszKernel& k, double theta,
                                  const GridSpec& grid, const ThermalOptions& opt) {
  if (!(theta > 0.0)) throw DomainError("thermal_equilibrium: theta must be positive");
  if (k.d != grid.d) throw DomainError("thermal_equilibrium: kernel and grid dimension differ");
  const std::size_t n = grid.size();
  const double vol = grid.cell_volume();
  GridConvolver conv(grid, k);
  std::vector<double> Vn(n);
  std::vector<double> x(grid.d);
  for (std::size_t i = 0; i < n; ++i) {
    grid.node(i, x);
    Vn[i] = V.value(x);
  }
  ThermalState cur;
  cur.logmu.resize(n);
  const double t0 = std::min(theta, opt.initial_theta);
  for (std::size_t i = 0; i < n; ++i) cur.logmu[i] = -t0 * Vn[i];
  normalize_log(cur.logmu, vol);
  evaluate(cur, conv, Vn, theta, vol);

  ThermalResult out{Density::gridded(grid, cur.mu), 0.0, 0.0, 0.0, opt.alpha0, 0, {}, {}};
  out.residual_history.push_back(cur.residual);
  out.energy_history.push_back(cur.energy);
  double alpha = opt.alpha0;
  ThermalState next;
  int it = 0;
  while (cur.residual >= opt.tol) {
    if (it >= opt.max_iter) {
      throw ConvergenceError("thermal_equilibrium: iteration limit reached", out.residual_history);
    }
    next.logmu.resize(n);
    for (std::size_t i = 0; i < n; ++i) next.logmu[i] = (1.0 - alpha) * cur.logmu[i] + alpha * cur.target[i];
    normalize_log(next.logmu, vol);
    evaluate(next, conv, Vn, theta, vol);
    ++it;
    const double etol = 1e-13 * std::max(1.0, std::abs(cur.energy));
    if (next.energy <= cur.energy + etol) {
      std::swap(cur, next);
      out.residual_history.push_back(cur.residual);
      out.energy_history.push_back(cur.energy);
      // The sup-norm residual is not monotone step to step; sustained growth
      // over a window means the damping is too weak for the stiffest mode.
      const std::size_t m = out.residual_history.size();
      if (m > kResidualWindow &&
          cur.residual > out.residual_history[m - 1 - kResidualWindow]) {
        alpha *= 0.5;
        if (alpha < opt.alpha_min) {
          throw ConvergenceError("thermal_equilibrium: damping exhausted", out.residual_history);
        }
      }
    } else {
      alpha *= 0.5;
      if (alpha < opt.alpha_min) {
        throw ConvergenceError("thermal_equilibrium: damping exhausted", out.residual_history);
      }
    }
  }
  out.density = Density::gridded(grid, cur.mu);
  out.c_theta = cur.c;
  out.el_residual = cur.residual;
  out.energy = cur.energy;
  out.alpha = alpha;
  out.iterations = it;
  return out;
}

double thermal_energy(const Density& mu, const Potential& V, const RieszKernel& k, double theta) {
  return energy_functional(mu, V, k) + mu.entropy() / theta;
}

double f_iterate(const Potential& V, int d, double theta, int order, std::span<const double> x,
                 double step) {
  if (order < 0) throw DomainError("f_iterate: order must be >= 0");
  const double cd = cd_coulomb(d);
  const double f0 = V.laplacian(x) / cd;
  if (order == 0) return f0;
  std::vector<double> y(x.begin(), x.end());
  const double center = std::log(f_iterate(V, d, theta, order - 1, y, step));
  double lap = 0.0;
  for (int a = 0; a < d; ++a) {
    y[a] = x[a] + step;
    const double fp = std::log(f_iterate(V, d, theta, order - 1, y, step));
    y[a] = x[a] - step;
    const double fm = std::log(f_iterate(V, d, theta, order - 1, y, step));
    y[a] = x[a];
    lap += (fp - 2.0 * center + fm) / (step * step);
  }
  return f0 + lap / (theta * cd);
}

}  // namespace riesz
