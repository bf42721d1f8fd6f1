#include "riesz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "riesz/errors.hpp"

namespace riesz {
namespace {

std::vector<double> rotation_J(int d) {
  if (d != 2) throw DomainError("conservative flow: default J is the planar rotation; pass J for d != 2");
  return {0.0, -1.0, 1.0, 0.0};
}

void check_antisymmetric(const std::vector<double>& J, int d) {
  if (static_cast<int>(J.size()) != d * d) throw DomainError("conservative flow: J must be d x d");
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (J[a * d + b] != -J[b * d + a]) throw DomainError("conservative flow: J must be antisymmetric");
    }
  }
}

std::vector<double> apply_J(const std::vector<double>& J, int d, const std::vector<double>& F) {
  std::vector<double> out(F.size(), 0.0);
  const std::size_t N = F.size() / d;
  for (std::size_t i = 0; i < N; ++i) {
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      for (int b = 0; b < d; ++b) s += J[a * d + b] * F[i * d + b];
      out[i * d + a] = s;
    }
  }
  return out;
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

FlowKind parse_flow(const std::string& name) {
  if (name == "gradient") return FlowKind::Gradient;
  if (name == "conservative" || name == "conservative-J") return FlowKind::Conservative;
  throw DomainError("unknown flow '" + name + "'");
}

std::string flow_name(FlowKind f) { return f == FlowKind::Gradient ? "gradient" : "conservative"; }

void flow_step(Configuration& X, const GibbsModel& model, FlowKind flow, double h, const std::vector<double>& J) {
  if (flow == FlowKind::Gradient) {
    const std::vector<double> F = force(X, model);
    for (std::size_t c = 0; c < F.size(); ++c) X.points[c] += h * F[c];
    return;
  }
  // Explicit midpoint on x' = J F(x).
  const int d = X.d;
  const std::vector<double> k1 = apply_J(J, d, force(X, model));
  Configuration mid = X;
  for (std::size_t c = 0; c < k1.size(); ++c) mid.points[c] += 0.5 * h * k1[c];
  const std::vector<double> k2 = apply_J(J, d, force(mid, model));
  for (std::size_t c = 0; c < k2.size(); ++c) X.points[c] += h * k2[c];
}

TrajectoryReport meanfield_track(const GibbsModel& model, const Configuration& X0, const EquilibriumResult& eq,
                                 const TrackOptions& opt) {
  if (!(opt.h > 0.0) || !(opt.T > 0.0)) throw DomainError("meanfield_track: need h > 0 and T > 0");
  if (opt.noise && opt.flow != FlowKind::Gradient) throw DomainError("meanfield_track: noise only with the gradient flow");
  const int d = X0.d;
  std::vector<double> J;
  if (opt.flow == FlowKind::Conservative) {
    J = opt.J.empty() ? rotation_J(d) : opt.J;
    check_antisymmetric(J, d);
  }
  const RieszKernel& k = model.kernel;
  const double N = static_cast<double>(X0.size());
  const double m = eq.density.sup_norm();
  const double shift = (k.is_log() ? N / (2.0 * d) * std::log(N * m) : 0.0) +
                       opt.C0 * std::pow(N, 1.0 + k.s / d) * std::pow(m, k.s / d);

  TrajectoryReport rep;
  rep.flow = flow_name(opt.flow);
  rep.N = X0.size();
  rep.d = d;
  rep.h = opt.h;
  Configuration X = X0;
  auto snapshot = [&](double t) {
    const double F = modulated_energy(X, eq.density, k);
    rep.times.push_back(t);
    rep.modulated_energy.push_back(F);
    rep.hamiltonian.push_back(hamiltonian(X, model.V, k));
    rep.bl_distance.push_back(empirical_distance(X, eq.density));
    rep.normalized.push_back((F + shift) / (N * N));
  };
  const std::size_t steps = static_cast<std::size_t>(std::llround(opt.T / opt.h));
  Rng rng(opt.seed, 0xd1ULL);
  const double noise = opt.noise ? std::sqrt(2.0 * opt.h / model.theta()) : 0.0;
  snapshot(0.0);
  double H = rep.hamiltonian.front();
  const double H0 = H;
  for (std::size_t n = 1; n <= steps; ++n) {
    flow_step(X, model, opt.flow, opt.h, J);
    if (opt.noise) {
      for (double& v : X.points) v += noise * rng.normal();
    }
    for (double v : X.points) {
      if (!std::isfinite(v)) throw ConvergenceError("meanfield_track: blow-up at step " + std::to_string(n));
    }
    const double Hn = hamiltonian(X, model.V, k);
    rep.max_energy_increase = std::max(rep.max_energy_increase, Hn - H);
    H = Hn;
    if (n % std::max<std::size_t>(1, opt.snapshot_every) == 0 || n == steps) {
      if (rep.times.back() != n * opt.h) snapshot(n * opt.h);
    }
  }
  rep.energy_drift = std::abs(H - H0);
  const double q0 = rep.normalized.front();
  double C = 0.0;
  for (std::size_t i = 1; i < rep.times.size(); ++i) {
    if (q0 > 0.0 && rep.normalized[i] > q0) C = std::max(C, std::log(rep.normalized[i] / q0) / rep.times[i]);
  }
  rep.gronwall_rate = C;
  rep.final = X;
  return rep;
}

void TrajectoryReport::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["flow"] = flow;
  j["N"] = N;
  j["d"] = d;
  j["h"] = h;
  j["times"] = times;
  j["modulated_energy"] = modulated_energy;
  j["hamiltonian"] = hamiltonian;
  j["bl_distance"] = bl_distance;
  j["normalized"] = normalized;
  j["gronwall_rate"] = gronwall_rate;
  j["max_energy_increase"] = max_energy_increase;
  j["energy_drift"] = energy_drift;
  os << j.dump(2) << "\n";
}

void TrajectoryReport::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "t,F_N,H_N,bl_distance,normalized\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << times[i] << "," << modulated_energy[i] << "," << hamiltonian[i] << "," << bl_distance[i] << ","
       << normalized[i] << "\n";
  }
}

double empirical_distance(const Configuration& X, const Density& mu, int quad_order) {
  const int d = X.d;
  if (mu.dim() != d) throw DomainError("empirical_distance: dimension mismatch");
  const WeightedNodes q = mu.quadrature(quad_order);
  const double inv = 1.0 / static_cast<double>(X.size());

  std::vector<double> lo(d, std::numeric_limits<double>::infinity()), hi(d, -lo[0]);
  auto extend = [&](std::span<const double> p) {
    for (int a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  };
  for (std::size_t i = 0; i < X.size(); ++i) extend(X.point(i));
  for (std::size_t i = 0; i < q.size(); ++i) extend(q.point(i));

  auto discrepancy = [&](auto&& phi) {
    double e = 0.0, m = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) e += phi(X.point(i));
    for (std::size_t i = 0; i < q.size(); ++i) m += q.weights[i] * phi(q.point(i));
    return std::abs(e * inv - m);
  };

  constexpr int kGrid = 9;
  std::size_t ncent = 1;
  for (int a = 0; a < d; ++a) ncent *= kGrid;
  std::vector<double> c(d);
  double best = 0.0;
  for (std::size_t idx = 0; idx < ncent; ++idx) {
    std::size_t t = idx;
    for (int a = 0; a < d; ++a) {
      const int i = static_cast<int>(t % kGrid);
      t /= kGrid;
      c[a] = lo[a] + (hi[a] - lo[a]) * i / (kGrid - 1);
    }
    auto dist_c = [&](std::span<const double> x) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
      return std::sqrt(s);
    };
    for (double rho : {0.1, 0.2, 0.4, 0.8, 1.6}) {
      best = std::max(best, discrepancy([&](std::span<const double> x) {
        return std::min(1.0, std::max(0.0, rho - dist_c(x)));
      }));
    }
    best = std::max(best, discrepancy([&](std::span<const double> x) { return std::min(dist_c(x), 1.0); }));
  }

  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (d == 2) {
    for (int j = 0; j < 8; ++j) {
      const double a = std::numbers::pi * j / 4.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    for (int a = 0; a < d; ++a) {
      std::vector<double> e(d, 0.0);
      e[a] = 1.0;
      dirs.push_back(e);
    }
  }
  const double reach = norm(lo) + norm(hi);
  for (const auto& e : dirs) {
    for (int j = 0; j < kGrid; ++j) {
      const double b = -reach + 2.0 * reach * j / (kGrid - 1);
      best = std::max(best, discrepancy([&](std::span<const double> x) {
        double s = -b;
        for (int a = 0; a < d; ++a) s += e[a] * x[a];
        return std::clamp(s, -1.0, 1.0);
      }));
    }
  }
  return best;
}

}  // namespace riesz
