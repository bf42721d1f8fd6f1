#include "riesz/jellium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

// Gamma(a, z) for a > -1, z > 0.
double upper_gamma(double a, double z) {
  if (a > 0.0) return boost::math::tgamma(a, z);
  if (a == 0.0) return boost::math::expint(1, z);
  return (boost::math::tgamma(a + 1.0, z) - std::pow(z, a) * std::exp(-z)) / a;
}

void check_exponent(int d, double s) {
  RieszKernel::make(d, s);
}

// Integer vectors n with |B n - y| <= R.
template <class F>
void enumerate(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Binv, const Eigen::VectorXd& y, double R, F&& visit) {
  const int d = static_cast<int>(B.rows());
  const Eigen::VectorXd c = Binv * y;
  std::vector<long> lo(d), hi(d), n(d);
  for (int i = 0; i < d; ++i) {
    const double w = R * Binv.row(i).norm();
    lo[i] = static_cast<long>(std::floor(c[i] - w));
    hi[i] = static_cast<long>(std::ceil(c[i] + w));
    n[i] = lo[i];
  }
  Eigen::VectorXd nv(d);
  while (true) {
    for (int i = 0; i < d; ++i) nv[i] = static_cast<double>(n[i]);
    const Eigen::VectorXd v = B * nv;
    if ((v - y).norm() <= R) visit(v, n);
    int i = d - 1;
    while (i >= 0 && n[i] == hi[i]) {
      n[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++n[i];
  }
}

// P = c G evaluated by splitting the heat-kernel integral at tau0.
class Ewald {
 public:
  Ewald(const Lattice& L, double s, const EwaldOptions& opt) : L_(L), s_(s), d_(L.dim()), opt_(opt) {
    check_exponent(d_, s);
    if (!(opt.split > 0.0)) throw DomainError("ewald: split must be positive");
    alpha_ = 0.5 * (d_ - s);
    tau0_ = opt.split * std::pow(L.covolume(), 2.0 / d_) / (4.0 * kPi);
    kappa_ = kappa(d_, s);
    gamma_norm_ = s == 0.0 ? 0.5 : 1.0 / (2.0 * std::tgamma(1.0 + 0.5 * s));
    rho_ = 0.5 * L.basis().colwise().norm().sum();
    double E = opt.exponent;
    while (true) {
      if (build(E)) break;
      E += 20.0;
      if (E > opt.max_exponent) {
        std::ostringstream msg;
        msg << "ewald: last shell above " << opt.shell_tol << " at exponent " << opt.max_exponent
            << "; try real radius > " << R_ << " and Fourier radius > " << K_;
        throw ToleranceError(msg.str());
      }
    }
  }

  static double kappa(int d, double s) {
    const double a = 0.5 * (d - s);
    if (s == 0.0) return std::tgamma(0.5 * d) * std::pow(4.0 * kPi, 0.5 * d) / 2.0;
    return std::pow(2.0, d - s) * std::pow(kPi, 0.5 * d) * std::tgamma(a) / (s * std::tgamma(0.5 * s));
  }

  double constant() const { return kappa_; }

  // P(x), or lim (P - g) when x is the origin and regularize is set.
  double value(std::span<const double> x, bool regularize) const {
    const Eigen::VectorXd y = L_.reduce(x);
    double sum = 0.0;
    for (const auto& v : real_) {
      const double r = (y - v).norm();
      if (r > R_) continue;
      if (r < 1e-300) {
        if (!regularize) throw SingularError("green_periodic: x is a lattice point");
        sum += self_limit();
        continue;
      }
      sum += real_term(r);
    }
    for (const auto& [k, c] : fourier_) sum += c * std::cos(2.0 * kPi * k.dot(y));
    return sum + background_;
  }

  void gradient(std::span<const double> x, std::span<double> out) const {
    const Eigen::VectorXd y = L_.reduce(x);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d_);
    for (const auto& v : real_) {
      const Eigen::VectorXd w = y - v;
      const double r = w.norm();
      if (r > R_) continue;
      if (r < 1e-300) throw SingularError("green_periodic: x is a lattice point");
      g += real_derivative(r) / r * w;
    }
    for (const auto& [k, c] : fourier_) g -= c * 2.0 * kPi * std::sin(2.0 * kPi * k.dot(y)) * k;
    for (int a = 0; a < d_; ++a) out[a] = g[a];
  }

 private:
  double real_term(double r) const {
    const double z = r * r / (4.0 * tau0_);
    return gamma_norm_ * std::pow(r, -s_) * upper_gamma(0.5 * s_, z);
  }

  double real_derivative(double r) const {
    const double z = r * r / (4.0 * tau0_);
    const double a = 0.5 * s_;
    double dr = -std::pow(r, -s_) * std::pow(z, a - 1.0) * std::exp(-z) * r / (2.0 * tau0_);
    if (s_ != 0.0) dr -= s_ * std::pow(r, -s_ - 1.0) * upper_gamma(a, z);
    return gamma_norm_ * dr;
  }

  double self_limit() const {
    if (s_ == 0.0) return 0.5 * (std::log(4.0 * tau0_) - std::numbers::egamma);
    return -std::pow(4.0 * tau0_, -0.5 * s_) / (s_ * std::tgamma(1.0 + 0.5 * s_));
  }

  bool build(double E) {
    const double V = L_.covolume();
    R_ = std::sqrt(4.0 * tau0_ * E);
    K_ = std::sqrt(E / (4.0 * kPi * kPi * tau0_));
    background_ = -kappa_ * std::pow(tau0_, alpha_) / (V * alpha_ * std::tgamma(alpha_));

    real_.clear();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d_);
    Eigen::MatrixXd Binv = L_.basis().inverse();
    enumerate(L_.basis(), Binv, zero, R_ + rho_, [&](const Eigen::VectorXd& v, const std::vector<long>&) {
      real_.push_back(v);
    });
    // Worst case last shell: reduced points lie within rho of the origin.
    const double ell = L_.shortest_vector();
    std::size_t outer = 0;
    for (const auto& v : real_) outer += v.norm() > R_ - ell - rho_;
    const double shell = outer * std::abs(real_term(std::max(R_ - ell, 0.5 * ell)));

    fourier_.clear();
    const Eigen::MatrixXd Dinv = L_.dual().inverse();
    double fshell = 0.0;
    const double ellk = Lattice(L_.dual()).shortest_vector();
    enumerate(L_.dual(), Dinv, zero, K_, [&](const Eigen::VectorXd& k, const std::vector<long>& n) {
      // Keep one of each pair +-k, doubling its coefficient.
      for (long ni : n) {
        if (ni > 0) break;
        if (ni < 0) return;
      }
      const double kn = k.norm();
      if (kn == 0.0) return;
      const double lam = 4.0 * kPi * kPi * kn * kn;
      const double c = 2.0 * kappa_ / V * std::pow(lam, -alpha_) * boost::math::gamma_q(alpha_, lam * tau0_);
      fourier_.emplace_back(k, c);
      if (kn > K_ - ellk) fshell += std::abs(c);
    });
    return shell < opt_.shell_tol && fshell < opt_.shell_tol;
  }

  const Lattice& L_;
  double s_;
  int d_;
  EwaldOptions opt_;
  double alpha_ = 0.0, tau0_ = 0.0, kappa_ = 0.0, gamma_norm_ = 0.0, rho_ = 0.0;
  double R_ = 0.0, K_ = 0.0, background_ = 0.0;
  std::vector<Eigen::VectorXd> real_;
  std::vector<std::pair<Eigen::VectorXd, double>> fourier_;
};

bool is_1d_log(const Lattice& L, double s) { return L.dim() == 1 && s == 0.0; }

// Periodic pair kernel P = c G with its regularized origin value.
class PairKernel {
 public:
  PairKernel(const Lattice& L, double s, const EwaldOptions& opt) : L_(L) {
    if (!is_1d_log(L, s)) ewald_.emplace(L, s, opt);
  }

  double value(std::span<const double> x) const {
    if (!ewald_) return 2.0 * kPi * green_1d_log(x[0], L_.covolume());
    return ewald_->value(x, false);
  }

  double self() const {
    if (!ewald_) return -std::log(2.0 * kPi / L_.covolume());
    std::vector<double> z(L_.dim(), 0.0);
    return ewald_->value(z, true);
  }

  void gradient(std::span<const double> x, std::span<double> out) const {
    if (!ewald_) {
      const double N = L_.covolume();
      const double t = kPi * x[0] / N;
      if (std::sin(t) == 0.0) throw SingularError("green_periodic: x is a lattice point");
      out[0] = -(kPi / N) * std::cos(t) / std::sin(t);
      return;
    }
    ewald_->gradient(x, out);
  }

 private:
  const Lattice& L_;
  std::optional<Ewald> ewald_;
};

}  // namespace

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() < 1) throw DomainError("lattice: basis must be square");
  const double det = basis_.determinant();
  const double scale = basis_.colwise().norm().prod();
  if (!(std::abs(det) > 1e-12 * scale)) throw DomainError("lattice: singular basis");
  covolume_ = std::abs(det);
  inverse_ = basis_.inverse();
  dual_ = inverse_.transpose();
  const int d = dim();
  shortest_ = basis_.colwise().norm().minCoeff();
  if (d <= 4) {
    std::vector<long> n(d, -2);
    Eigen::VectorXd nv(d);
    while (true) {
      bool nonzero = false;
      for (int i = 0; i < d; ++i) {
        nv[i] = static_cast<double>(n[i]);
        nonzero |= n[i] != 0;
      }
      if (nonzero) shortest_ = std::min(shortest_, (basis_ * nv).norm());
      int i = d - 1;
      while (i >= 0 && n[i] == 2) {
        n[i] = -2;
        --i;
      }
      if (i < 0) break;
      ++n[i];
    }
  }
}

Lattice Lattice::hypercubic(int d, double covolume) {
  if (d < 1 || !(covolume > 0.0)) throw DomainError("lattice: need d >= 1 and covolume > 0");
  return Lattice(Eigen::MatrixXd::Identity(d, d) * std::pow(covolume, 1.0 / d));
}

Lattice Lattice::triangular(double covolume) {
  return from_tau({0.5, std::sqrt(3.0) / 2.0}, covolume);
}

Lattice Lattice::from_tau(std::complex<double> tau, double covolume) {
  if (!(tau.imag() > 0.0) || !(covolume > 0.0)) throw DomainError("lattice: need Im tau > 0 and covolume > 0");
  const double t = std::sqrt(covolume / tau.imag());
  Eigen::MatrixXd B(2, 2);
  B << t, t * tau.real(), 0.0, t * tau.imag();
  return Lattice(B);
}

Eigen::VectorXd Lattice::reduce(std::span<const double> x) const {
  const int d = dim();
  if (static_cast<int>(x.size()) != d) throw DomainError("lattice: dimension mismatch");
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), d);
  Eigen::VectorXd c = inverse_ * v;
  for (int i = 0; i < d; ++i) c[i] -= std::round(c[i]);
  return basis_ * c;
}

void Lattice::wrap(std::span<double> x) const {
  const int d = dim();
  Eigen::Map<Eigen::VectorXd> v(x.data(), d);
  Eigen::VectorXd c = inverse_ * v;
  for (int i = 0; i < d; ++i) {
    c[i] -= std::floor(c[i]);
    if (c[i] >= 1.0) c[i] = 0.0;
  }
  v = basis_ * c;
}

Lattice Lattice::dilated(double t) const {
  if (!(t > 0.0)) throw DomainError("lattice: dilation must be positive");
  return Lattice(basis_ * t);
}

std::string Lattice::to_json() const {
  nlohmann::json j;
  j["dim"] = dim();
  j["covolume"] = covolume_;
  nlohmann::json cols = nlohmann::json::array();
  for (int c = 0; c < dim(); ++c) {
    std::vector<double> col(basis_.col(c).data(), basis_.col(c).data() + dim());
    cols.push_back(col);
  }
  j["basis"] = cols;
  return j.dump();
}

TorusConfig::TorusConfig(Lattice L, Configuration pts) : lattice(std::move(L)), X(std::move(pts)) {
  if (X.d != lattice.dim()) throw DomainError("torus: dimension mismatch");
  if (std::abs(lattice.covolume() - static_cast<double>(X.size())) > 1e-9 * lattice.covolume()) {
    throw DomainError("torus: covolume must equal the number of points");
  }
  for (std::size_t i = 0; i < X.size(); ++i) lattice.wrap(X.point(i));
}

double torus_constant(int d, double s) {
  check_exponent(d, s);
  if (d == 1 && s == 0.0) return 2.0 * kPi;
  return Ewald::kappa(d, s);
}

double green_1d_log(double x, double N) {
  if (!(N > 0.0)) throw DomainError("green_1d_log: N must be positive");
  const double t = std::sin(kPi * x / N);
  const double r = x / N - std::round(x / N);
  if (t == 0.0 || r == 0.0) throw SingularError("green_1d_log: x is a lattice point");
  return -std::log(std::abs(2.0 * t)) / (2.0 * kPi);
}

double periodic_kernel_ewald(const Lattice& L, double s, std::span<const double> x, const EwaldOptions& opt) {
  return Ewald(L, s, opt).value(x, false);
}

double periodic_kernel_self_ewald(const Lattice& L, double s, const EwaldOptions& opt) {
  std::vector<double> z(L.dim(), 0.0);
  return Ewald(L, s, opt).value(z, true);
}

double green_periodic(const Lattice& L, double s, std::span<const double> x, const EwaldOptions& opt) {
  if (is_1d_log(L, s)) return green_1d_log(x[0], L.covolume());
  const Ewald ew(L, s, opt);
  return ew.value(x, false) / ew.constant();
}

void green_periodic_gradient(const Lattice& L, double s, std::span<const double> x, std::span<double> out,
                             const EwaldOptions& opt) {
  const PairKernel P(L, s, opt);
  P.gradient(x, out);
  const double c = torus_constant(L.dim(), s);
  for (int a = 0; a < L.dim(); ++a) out[a] /= c;
}

double madelung(const Lattice& L, double s, const EwaldOptions& opt) {
  const PairKernel P(L, s, opt);
  return P.self() / torus_constant(L.dim(), s);
}

double W_periodic(const TorusConfig& cfg, double s, const EwaldOptions& opt) {
  const PairKernel P(cfg.lattice, s, opt);
  const std::size_t N = cfg.size();
  const int d = cfg.X.d;
  std::vector<double> diff(d);
  double pairs = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      for (int a = 0; a < d; ++a) diff[a] = cfg.X.point(i)[a] - cfg.X.point(j)[a];
      const Eigen::VectorXd y = cfg.lattice.reduce(diff);
      if (y.norm() == 0.0) return std::numeric_limits<double>::infinity();
      pairs += P.value(diff);
    }
  }
  return pairs / static_cast<double>(N) + 0.5 * P.self();
}

std::vector<double> W_periodic_gradient(const TorusConfig& cfg, double s, const EwaldOptions& opt) {
  const PairKernel P(cfg.lattice, s, opt);
  const std::size_t N = cfg.size();
  const int d = cfg.X.d;
  std::vector<double> grad(N * d, 0.0), diff(d), g(d);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      for (int a = 0; a < d; ++a) diff[a] = cfg.X.point(i)[a] - cfg.X.point(j)[a];
      P.gradient(diff, g);
      for (int a = 0; a < d; ++a) {
        grad[i * d + a] += g[a] / static_cast<double>(N);
        grad[j * d + a] -= g[a] / static_cast<double>(N);
      }
    }
  }
  return grad;
}

double lattice_energy_2d(std::complex<double> tau, double s, const EwaldOptions& opt) {
  const Lattice L = Lattice::from_tau(tau, 1.0);
  return 0.5 * PairKernel(L, s, opt).self();
}

ScanResult lattice_scan_2d(int grid, double s, double im_max, const EwaldOptions& opt) {
  const double y0 = std::sqrt(3.0) / 2.0;
  if (grid < 2 || !(im_max > y0)) throw DomainError("lattice_scan_2d: need grid >= 2 and im_max > sqrt(3)/2");
  ScanResult res;
  res.W_min = std::numeric_limits<double>::infinity();
  const double dx = 0.5 / (grid - 1);
  const double dy = (im_max - y0) / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    const double x = i * dx;
    for (int j = 0; j < grid; ++j) {
      const double y = y0 + j * dy;
      if (x * x + y * y < 1.0 - 1e-12) continue;
      const double W = lattice_energy_2d({x, y}, s, opt);
      res.table.push_back({x, y, W});
      if (W < res.W_min) {
        res.W_min = W;
        res.argmin = {x, y};
      }
    }
  }
  res.dre = 0.5 * dx;
  res.dim = 0.5 * dy;
  return res;
}

void ScanResult::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "tau_re,tau_im,W\n";
  for (const auto& r : table) os << r.tau_re << "," << r.tau_im << "," << r.W << "\n";
}

TorusOptimizeResult optimize_torus(const TorusConfig& start, double s, const TorusOptimizeOptions& opt,
                                   const EwaldOptions& ewald) {
  if (!start.X.simple()) throw DomainError("optimize_torus: start has coincident points");
  TorusOptimizeResult res{start, 0.0, 0.0, 0, {}};
  TorusConfig& cfg = res.config;
  const int d = cfg.X.d;
  const double N = static_cast<double>(cfg.size());
  double W = W_periodic(cfg, s, ewald);
  std::vector<double> g = W_periodic_gradient(cfg, s, ewald);
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double gn = sup(g);
  res.W_history.push_back(W);
  double step = 0.1 * std::pow(cfg.lattice.covolume() / N, 2.0 / d) * N;
  std::size_t it = 0;
  for (; it < opt.max_iter && gn > opt.tol; ++it) {
    bool accepted = false;
    double gsq = 0.0;
    for (double v : g) gsq += v * v;
    for (int bt = 0; bt < 60; ++bt) {
      TorusConfig trial = cfg;
      for (std::size_t c = 0; c < g.size(); ++c) trial.X.points[c] -= step * g[c];
      for (std::size_t i = 0; i < trial.size(); ++i) trial.lattice.wrap(trial.X.point(i));
      const double Wt = W_periodic(trial, s, ewald);
      std::vector<double> gt;
      if (Wt <= W - 1e-4 * step * gsq) {
        accepted = true;
      } else if (std::abs(Wt - W) <= 1e-14 * (1.0 + std::abs(W))) {
        // Below rounding the energy cannot rank the step; use the gradient.
        gt = W_periodic_gradient(trial, s, ewald);
        accepted = sup(gt) < gn;
      }
      if (accepted) {
        if (gt.empty()) gt = W_periodic_gradient(trial, s, ewald);
        // Barzilai-Borwein step from the displacement -step * g.
        double sy = 0.0;
        for (std::size_t c = 0; c < g.size(); ++c) sy += -step * g[c] * (gt[c] - g[c]);
        const double ss = step * step * gsq;
        cfg = std::move(trial);
        W = std::min(W, Wt);
        g = std::move(gt);
        gn = sup(g);
        res.W_history.push_back(W);
        step = sy > 0.0 ? ss / sy : 2.0 * step;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (gn < 1e3 * opt.tol) break;
      throw ConvergenceError("optimize_torus: line search failed", res.W_history);
    }
  }
  if (gn > 1e3 * opt.tol) throw ConvergenceError("optimize_torus: iteration limit reached", res.W_history);
  res.W = W;
  res.grad_norm = gn;
  res.iterations = it;
  return res;
}

}  // namespace riesz
