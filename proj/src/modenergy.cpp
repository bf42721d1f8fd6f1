#include "riesz/modenergy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "riesz/errors.hpp"

namespace riesz {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void check_dims(const Configuration& X, const RieszKernel& k) {
  if (X.d != k.d) throw DomainError("configuration and kernel dimensions differ");
}

// Points and velocities of both the particles and the quadrature nodes.
struct TransportSetup {
  int d;
  std::size_t N;
  WeightedNodes q;
  std::vector<double> vx, vq;
};

TransportSetup setup(const Configuration& X, const Density& mu, const TransportField& v, int order) {
  TransportSetup s{X.d, X.size(), mu.quadrature(order), {}, {}};
  if (mu.dim() != X.d || v.d != X.d) throw DomainError("transport: dimension mismatch");
  s.vx.resize(X.points.size());
  s.vq.resize(s.q.points.size());
  for (std::size_t i = 0; i < s.N; ++i) v.v(X.point(i), std::span<double>(s.vx.data() + i * s.d, s.d));
  for (std::size_t i = 0; i < s.q.size(); ++i) v.v(s.q.point(i), std::span<double>(s.vq.data() + i * s.d, s.d));
  return s;
}

// 1/2 [ sum_{i!=j} K(x_i,x_j) - 2N sum_i sum_q w_q K(x_i,y_q) + N^2 sum_{q!=q'} w w' K(y_q,y_q') ]
// for a kernel K(z, w) of the separation z = a - b and velocity difference w = v(a) - v(b).
template <class Kern>
double expand(const Configuration& X, const TransportSetup& s, Kern&& K) {
  const int d = s.d;
  std::vector<double> z(d), w(d);
  auto eval = [&](const double* a, const double* va, const double* b, const double* vb) {
    for (int c = 0; c < d; ++c) {
      z[c] = a[c] - b[c];
      w[c] = va[c] - vb[c];
    }
    return K(z, w);
  };
  const double N = static_cast<double>(s.N);
  double pp = 0.0;
  for (std::size_t i = 0; i < s.N; ++i) {
    for (std::size_t j = i + 1; j < s.N; ++j) {
      pp += eval(&X.points[i * d], &s.vx[i * d], &X.points[j * d], &s.vx[j * d]);
    }
  }
  double pq = 0.0;
  for (std::size_t i = 0; i < s.N; ++i) {
    double row = 0.0;
    for (std::size_t a = 0; a < s.q.size(); ++a) {
      row += s.q.weights[a] * eval(&X.points[i * d], &s.vx[i * d], &s.q.points[a * d], &s.vq[a * d]);
    }
    pq += row;
  }
  double qq = 0.0;
  for (std::size_t a = 0; a < s.q.size(); ++a) {
    double row = 0.0;
    for (std::size_t b = a + 1; b < s.q.size(); ++b) {
      row += s.q.weights[b] * eval(&s.q.points[a * d], &s.vq[a * d], &s.q.points[b * d], &s.vq[b * d]);
    }
    qq += s.q.weights[a] * row;
  }
  // K is symmetric under swapping the pair, so ordered sums are twice the unordered ones.
  return pp - N * pq + N * N * qq;
}

}  // namespace

Configuration::Configuration(int dim, std::vector<double> pts) : d(dim), points(std::move(pts)) {
  if (d < 1 || points.size() % d != 0) throw DomainError("Configuration: coordinate count not a multiple of d");
  for (double v : points) {
    if (!std::isfinite(v)) throw DomainError("Configuration: non-finite coordinate");
  }
}

double Configuration::min_gap() const {
  double m = kInf;
  const std::size_t N = size();
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) m = std::min(m, dist(point(i), point(j)));
  }
  return m;
}

void Configuration::translate(std::span<const double> shift) {
  for (std::size_t i = 0; i < size(); ++i) {
    for (int a = 0; a < d; ++a) points[i * d + a] += shift[a];
  }
}

void Configuration::scale(double t) {
  for (double& v : points) v *= t;
}

double pair_energy(const Configuration& X, const RieszKernel& k) {
  check_dims(X, k);
  const std::size_t N = X.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < N; ++j) row += eval_g(k, dist(X.point(i), X.point(j)));
    acc += row;
  }
  return acc;
}

double hamiltonian(const Configuration& X, const Potential& V, const RieszKernel& k) {
  const double N = static_cast<double>(X.size());
  double conf = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) conf += V.value(X.point(i));
  return pair_energy(X, k) + N * conf;
}

double modulated_energy_background(const Configuration& X, const Density& nu, const RieszKernel& k) {
  check_dims(X, k);
  const double pair = pair_energy(X, k);
  if (pair == kInf) return kInf;
  double cross = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) cross += nu.potential(k, X.point(i));
  return pair - cross + 0.5 * nu.self_energy(k);
}

double modulated_energy(const Configuration& X, const Density& mu, const RieszKernel& k) {
  check_dims(X, k);
  const double N = static_cast<double>(X.size());
  const double pair = pair_energy(X, k);
  if (pair == kInf) return kInf;
  double cross = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) cross += mu.potential(k, X.point(i));
  return pair - N * cross + 0.5 * N * N * mu.self_energy(k);
}

double renormalized_modulated_energy(const Configuration& X, const Density& mu, const RieszKernel& k) {
  const double N = static_cast<double>(X.size());
  double F = modulated_energy(X, mu, k);
  if (k.is_log()) F += N / (2.0 * k.d) * std::log(N * mu.sup_norm());
  return F;
}

std::vector<double> nn_radii(const Configuration& X, double lambda) {
  const std::size_t N = X.size();
  std::vector<double> r(N, lambda);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const double dd = dist(X.point(i), X.point(j));
      r[i] = std::min(r[i], dd);
      r[j] = std::min(r[j], dd);
    }
  }
  for (double& v : r) v *= 0.25;
  return r;
}

double default_lambda(std::size_t N, const Density& mu) {
  return std::pow(static_cast<double>(N) * mu.sup_norm(), -1.0 / mu.dim());
}

double splitting_residual(const Configuration& X, const EquilibriumResult& eq, const Potential& V) {
  const double N = static_cast<double>(X.size());
  const double H = hamiltonian(X, V, eq.kernel);
  double zsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) zsum += zeta(X.point(i), eq, V);
  const double E = energy_functional(eq.density, V, eq.kernel);
  const double F = modulated_energy(X, eq.density, eq.kernel);
  return std::abs(H - (N * N * E + N * zsum + F));
}

double thermal_splitting_residual(const Configuration& X, const Density& mu_theta, const Potential& V,
                                  const RieszKernel& k, double theta) {
  const double N = static_cast<double>(X.size());
  const double H = hamiltonian(X, V, k);
  double lsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double m = mu_theta.value(X.point(i));
    if (!(m > 0.0)) throw DomainError("thermal_splitting_residual: point outside the support of mu_theta");
    lsum += std::log(m);
  }
  const double Et = thermal_energy(mu_theta, V, k, theta);
  const double F = modulated_energy(X, mu_theta, k);
  return std::abs(H - (N * N * Et - N / theta * lsum + F));
}

double blowup_scaling_residual(const Configuration& X, const Density& mu, const RieszKernel& k,
                               bool relative) {
  const double N = static_cast<double>(X.size());
  const double d = k.d;
  const double F = modulated_energy(X, mu, k);
  double lhs = std::pow(N, -k.s / d) * (F + (k.is_log() ? N / (2.0 * d) * std::log(N) : 0.0));
  const double t = std::pow(N, 1.0 / d);
  Configuration Y = X;
  Y.scale(t);
  const Density nu = mu.dilated(t, N * mu.mass());
  const double rhs = modulated_energy_background(Y, nu, k);
  const double r = std::abs(lhs - rhs);
  return relative ? r / std::abs(F) : r;
}

// ---------------------------------------------------------------- transport

TransportField TransportField::constant(std::vector<double> b) {
  TransportField f;
  f.d = static_cast<int>(b.size());
  const int d = f.d;
  f.v = [b](std::span<const double>, std::span<double> out) { std::copy(b.begin(), b.end(), out.begin()); };
  f.jacobian = [d](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.begin() + d * d, 0.0);
  };
  f.lipschitz = 0.0;
  return f;
}

TransportField TransportField::affine(int d, std::vector<double> A, std::vector<double> b) {
  if (static_cast<int>(A.size()) != d * d || static_cast<int>(b.size()) != d) {
    throw DomainError("TransportField::affine: shape mismatch");
  }
  TransportField f;
  f.d = d;
  f.v = [A, b, d](std::span<const double> x, std::span<double> out) {
    for (int a = 0; a < d; ++a) {
      double s = b[a];
      for (int c = 0; c < d; ++c) s += A[a * d + c] * x[c];
      out[a] = s;
    }
  };
  f.jacobian = [A](std::span<const double>, std::span<double> out) { std::copy(A.begin(), A.end(), out.begin()); };
  double L = 0.0;
  for (double a : A) L = std::max(L, std::abs(a));
  f.lipschitz = L * d;
  return f;
}

TransportField TransportField::trigonometric(int d, double amp, std::uint64_t seed) {
  Rng rng(seed, 0x7f4a7c15ULL);
  std::vector<double> kk(d * d), ph(d * d);
  for (auto& v : kk) v = 0.5 + 1.5 * rng.uniform();
  for (auto& v : ph) v = 6.283185307179586 * rng.uniform();
  TransportField f;
  f.d = d;
  f.v = [=](std::span<const double> x, std::span<double> out) {
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      for (int b = 0; b < d; ++b) s += std::sin(kk[a * d + b] * x[b] + ph[a * d + b]);
      out[a] = amp * s;
    }
  };
  f.jacobian = [=](std::span<const double> x, std::span<double> out) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) out[a * d + b] = amp * kk[a * d + b] * std::cos(kk[a * d + b] * x[b] + ph[a * d + b]);
    }
  };
  double L = 0.0;
  for (double v : kk) L = std::max(L, v);
  f.lipschitz = amp * L * d;
  return f;
}

std::vector<double> TransportField::at(std::span<const double> x) const {
  std::vector<double> out(d);
  v(x, out);
  return out;
}

Configuration push_forward(const Configuration& X, const TransportField& v, double t) {
  Configuration Y = X;
  std::vector<double> w(X.d);
  for (std::size_t i = 0; i < X.size(); ++i) {
    v.v(X.point(i), w);
    for (int a = 0; a < X.d; ++a) Y.points[i * X.d + a] += t * w[a];
  }
  return Y;
}

std::vector<double> flow_map(const TransportField& v, std::span<const double> x, double t, int steps) {
  const int d = v.d;
  std::vector<double> y(x.begin(), x.end()), k1(d), k2(d), k3(d), k4(d), tmp(d);
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    v.v(y, k1);
    for (int a = 0; a < d; ++a) tmp[a] = y[a] + 0.5 * h * k1[a];
    v.v(tmp, k2);
    for (int a = 0; a < d; ++a) tmp[a] = y[a] + 0.5 * h * k2[a];
    v.v(tmp, k3);
    for (int a = 0; a < d; ++a) tmp[a] = y[a] + h * k3[a];
    v.v(tmp, k4);
    for (int a = 0; a < d; ++a) y[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
  }
  return y;
}

double a_n(const Configuration& X, const Density& mu, const TransportField& v, int n, const RieszKernel& k,
           int quad_order) {
  if (n != 1 && n != 2) throw DomainError("a_n: n must be 1 or 2");
  check_dims(X, k);
  if (!X.simple() && k.singular_at_origin()) throw SingularError("a_n: coincident points");
  const TransportSetup s = setup(X, mu, v, quad_order);
  std::vector<double> grad(X.d);
  if (n == 1) {
    return expand(X, s, [&](const std::vector<double>& z, const std::vector<double>& w) {
      grad_g(k, z, grad);
      double acc = 0.0;
      for (int a = 0; a < X.d; ++a) acc += grad[a] * w[a];
      return acc;
    });
  }
  return expand(X, s, [&](const std::vector<double>& z, const std::vector<double>& w) {
    return hess_g_contract(k, z, w);
  });
}

double transported_increment(const Configuration& X, const Density& mu, const TransportField& v, double t,
                             const RieszKernel& k, int quad_order) {
  check_dims(X, k);
  const TransportSetup s = setup(X, mu, v, quad_order);
  return expand(X, s, [&](const std::vector<double>& z, const std::vector<double>& w) {
    double zz = 0.0, zw = 0.0, ww = 0.0;
    for (int a = 0; a < X.d; ++a) {
      zz += z[a] * z[a];
      zw += z[a] * w[a];
      ww += w[a] * w[a];
    }
    const double u = (2.0 * t * zw + t * t * ww) / zz;
    const double l = std::log1p(u);
    if (k.s == 0.0) return -0.5 * l;
    return std::pow(zz, -0.5 * k.s) / k.s * std::expm1(-0.5 * k.s * l);
  });
}

double commutator_ratio(const Configuration& X, const Density& mu, const TransportField& v,
                        const RieszKernel& k, int quad_order) {
  if (v.lipschitz == 0.0) return 0.0;
  const double N = static_cast<double>(X.size());
  const double A1 = a_n(X, mu, v, 1, k, quad_order);
  const double m = mu.sup_norm();
  const double denom = renormalized_modulated_energy(X, mu, k) +
                       std::pow(N, 1.0 + k.s / k.d) * std::pow(m, k.s / k.d);
  return std::abs(A1) / (v.lipschitz * denom);
}

}  // namespace riesz
