#include "riesz/sampler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "riesz/equilibrium.hpp"
#include "riesz/errors.hpp"

namespace riesz {
namespace {

// Recursive-descent evaluator for BetaFormula.
class ExprParser {
 public:
  ExprParser(const std::string& s, double N) : s_(s), N_(N) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("beta formula '" + s_ + "': " + why + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  double power() {
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "N") return N_;
      if (name != "log" && name != "exp" && name != "sqrt") fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      const double arg = sum();
      if (!eat(')')) fail("missing ')'");
      if (name == "log") return std::log(arg);
      if (name == "exp") return std::exp(arg);
      return std::sqrt(arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  double N_;
  std::size_t pos_ = 0;
};

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_radius(const Configuration& X) {
  double m = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double r2 = 0.0;
    for (double v : X.point(i)) r2 += v * v;
    m = std::max(m, std::sqrt(r2));
  }
  return m;
}

struct BlowUp {
  std::size_t step;
};

double laplacian_bound(const GibbsModel& model, const Configuration& X) {
  if (!model.V.is_radial_poly()) return 1.0;
  const double r = std::max(1.0, max_radius(X));
  return std::abs(model.V.radial_laplacian(r, model.kernel.d));
}

template <class StepFn>
ChainState run_with_halving(const GibbsModel& model, const Configuration& X0, const ChainOptions& opt,
                            StepFn&& run) {
  if (opt.step < 0.0) throw DomainError("chain: step must be positive");
  if (opt.step > 0.0) {
    try {
      return run(opt.step);
    } catch (const BlowUp& b) {
      throw ConvergenceError("chain: blow-up at step " + std::to_string(b.step));
    }
  }
  double h = default_step(model, laplacian_bound(model, X0));
  for (int attempt = 0; attempt < 12; ++attempt) {
    try {
      return run(h);
    } catch (const BlowUp&) {
      h *= 0.5;
    }
  }
  throw ConvergenceError("chain: blow-up persists after repeated step halving");
}

}  // namespace

BetaFormula::BetaFormula(std::string text) : text_(std::move(text)) {
  (void)(*this)(1.0);  // validate syntax early
}

double BetaFormula::operator()(double N) const { return ExprParser(text_, N).parse(); }

GibbsModel GibbsModel::make(RieszKernel k, Potential V, double beta, std::size_t N) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("GibbsModel: beta must be positive and finite");
  if (N < 1) throw DomainError("GibbsModel: N must be >= 1");
  RieszKernel::make(k.d, k.s);
  if (!V.confining()) throw DomainError("GibbsModel: potential is not confining");
  return GibbsModel{k, std::move(V), beta, N};
}

GibbsModel GibbsModel::make(RieszKernel k, Potential V, const BetaFormula& beta, std::size_t N) {
  return make(k, std::move(V), beta(static_cast<double>(N)), N);
}

double GibbsModel::theta() const {
  return beta * std::pow(static_cast<double>(N), 1.0 - kernel.s / kernel.d);
}

std::vector<double> force(const Configuration& X, const GibbsModel& model) {
  const int d = X.d;
  const std::size_t N = X.size();
  if (d != model.kernel.d) throw DomainError("force: dimension mismatch");
  std::vector<double> F(X.points.size(), 0.0);
  std::vector<double> z(d), gz(d);
  const double invN = 1.0 / static_cast<double>(N);
  const bool log_kernel = model.kernel.s == 0.0;
  const double half_exp = -0.5 * (model.kernel.s + 2.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        z[a] = X.points[i * d + a] - X.points[j * d + a];
        r2 += z[a] * z[a];
      }
      if (r2 == 0.0) throw SingularError("force: coincident points");
      // grad g(z) = f z, as in grad_g
      const double f = invN * (log_kernel ? -1.0 / r2 : -std::pow(r2, half_exp));
      for (int a = 0; a < d; ++a) {
        F[i * d + a] -= f * z[a];
        F[j * d + a] += f * z[a];
      }
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    model.V.gradient(X.point(i), gz);
    for (int a = 0; a < d; ++a) F[i * d + a] -= gz[a];
  }
  return F;
}

double default_step(const GibbsModel& model, double lap_bound) {
  return 0.1 / (std::pow(static_cast<double>(model.N), 2.0 / model.kernel.d) * (1.0 + lap_bound));
}

ChainState langevin_run(const GibbsModel& model, const Configuration& X0, const ChainOptions& opt) {
  if (X0.size() != model.N) throw DomainError("langevin_run: configuration size differs from model N");
  const double theta = model.theta();
  return run_with_halving(model, X0, opt, [&](double h) {
    Rng rng(opt.seed, opt.stream);
    ChainState st{X0, 0, 0, h, 0, 0, false};
    const double noise = std::sqrt(2.0 * h / theta);
    for (std::size_t n = 1; n <= opt.n_steps; ++n) {
      const std::vector<double> F = force(st.X, model);
      for (std::size_t c = 0; c < F.size(); ++c) st.X.points[c] += h * F[c] + noise * rng.normal();
      if (!(sup_abs(st.X.points) < opt.domain_bound)) throw BlowUp{n};
      st.step = n;
      if (opt.observer && opt.observe_every && n % opt.observe_every == 0) opt.observer(n, st.X);
    }
    st.rng_counter = rng.counter();
    return st;
  });
}

ChainState mala_run(const GibbsModel& model, const Configuration& X0, const ChainOptions& opt) {
  if (X0.size() != model.N) throw DomainError("mala_run: configuration size differs from model N");
  const double theta = model.theta();
  const double scale = theta / static_cast<double>(model.N);  // target exp(-scale * H)
  return run_with_halving(model, X0, opt, [&](double h) {
    Rng rng(opt.seed, opt.stream);
    ChainState st{X0, 0, 0, h, 0, 0, false};
    const double noise = std::sqrt(2.0 * h / theta);
    double H = hamiltonian(st.X, model.V, model.kernel);
    std::vector<double> F = force(st.X, model);
    Configuration Y = st.X;
    for (std::size_t n = 1; n <= opt.n_steps; ++n) {
      for (std::size_t c = 0; c < F.size(); ++c) {
        Y.points[c] = st.X.points[c] + h * F[c] + noise * rng.normal();
      }
      const double u = rng.uniform();
      ++st.proposals;
      if (!(sup_abs(Y.points) < opt.domain_bound)) throw BlowUp{n};
      const double HY = hamiltonian(Y, model.V, model.kernel);
      if (std::isfinite(HY)) {
        const std::vector<double> FY = force(Y, model);
        double fwd = 0.0, bwd = 0.0;
        for (std::size_t c = 0; c < F.size(); ++c) {
          const double a = Y.points[c] - st.X.points[c] - h * F[c];
          const double b = st.X.points[c] - Y.points[c] - h * FY[c];
          fwd += a * a;
          bwd += b * b;
        }
        const double log_alpha = -scale * (HY - H) - theta / (4.0 * h) * (bwd - fwd);
        if (std::log(u) < log_alpha) {
          std::swap(st.X, Y);
          H = HY;
          F = FY;
          ++st.accepted;
        }
      }
      st.step = n;
      if (opt.observer && opt.observe_every && n % opt.observe_every == 0) opt.observer(n, st.X);
    }
    st.rng_counter = rng.counter();
    st.low_acceptance = st.proposals >= 100 && st.acceptance_rate() < 0.01;
    return st;
  });
}

Configuration ginibre_sample(std::size_t N, Rng& rng) {
  if (N < 1) throw DomainError("ginibre_sample: N must be >= 1");
  const lapack_int n = static_cast<lapack_int>(N);
  std::vector<std::complex<double>> A(N * N), w(N);
  const double sd = std::sqrt(0.5 / static_cast<double>(N));
  for (auto& a : A) {
    const double re = rng.normal(), im = rng.normal();
    a = {sd * re, sd * im};
  }
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, A.data(), n, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw ConvergenceError("ginibre_sample: eigenvalue solver failed, info=" + std::to_string(info));
  std::vector<double> pts(2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    pts[2 * i] = w[i].real();
    pts[2 * i + 1] = w[i].imag();
  }
  return Configuration(2, std::move(pts));
}

Configuration ginibre_sample(std::size_t N, std::uint64_t seed) {
  Rng rng(seed, 0x61e9ULL);
  return ginibre_sample(N, rng);
}

Configuration hermite_beta_sample(std::size_t N, double beta, Rng& rng) {
  if (N < 1) throw DomainError("hermite_beta_sample: N must be >= 1");
  if (!(beta > 0.0)) throw DomainError("hermite_beta_sample: beta must be positive");
  std::vector<double> diag(N), off(N > 1 ? N - 1 : 1, 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // (1/sqrt 2) * [N(0,2) on the diagonal, chi_{beta (N-k)} off it].
  for (std::size_t i = 0; i < N; ++i) diag[i] = rng.normal();  // N(0,2)/sqrt(2)
  for (std::size_t k = 1; k < N; ++k) {
    std::gamma_distribution<double> ga(0.5 * beta * static_cast<double>(N - k), 2.0);
    off[k - 1] = inv_sqrt2 * std::sqrt(ga(rng));
  }
  const lapack_int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(N), diag.data(), off.data(), nullptr, 1);
  if (info != 0) throw ConvergenceError("hermite_beta_sample: eigenvalue solver failed");
  const double s = std::sqrt(2.0 / (beta * static_cast<double>(N)));
  for (double& v : diag) v *= s;
  return Configuration(1, std::move(diag));
}

Configuration hermite_beta_sample(std::size_t N, double beta, std::uint64_t seed) {
  Rng rng(seed, 0x4e7ULL);
  return hermite_beta_sample(N, beta, rng);
}

MinimizeResult minimize_energy(const GibbsModel& model, const Configuration& X0, const MinimizeOptions& opt) {
  const double N = static_cast<double>(X0.size());
  MinimizeResult res{X0, 0.0, 0.0, 0, {}, std::numeric_limits<double>::quiet_NaN(), 0.0};
  Configuration& X = res.X;
  auto gradient = [&](const Configuration& Y) {
    std::vector<double> g = force(Y, model);
    for (double& v : g) v *= -N;
    return g;
  };
  double H = hamiltonian(X, model.V, model.kernel);
  if (!std::isfinite(H)) throw DomainError("minimize_energy: initial configuration has infinite energy");
  std::vector<double> g = gradient(X);
  res.energy_history.push_back(H);
  double alpha = 1e-2 / (N * (1.0 + sup_abs(g) / N));
  std::vector<double> xprev, gprev;
  Configuration trial = X;
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    res.grad_norm = sup_abs(g);
    if (res.grad_norm < opt.tol) break;
    if (!xprev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t c = 0; c < g.size(); ++c) {
        const double s = X.points[c] - xprev[c];
        const double y = g[c] - gprev[c];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 0.0) alpha = ss / sy;
    }
    double gg = 0.0;
    for (double v : g) gg += v * v;
    // Once H changes by less than rounding, Armijo is undecidable; then a
    // step is taken if H stays within rounding and the gradient shrinks.
    const double noise = 1e-13 * std::max(1.0, std::abs(H));
    bool ok = false;
    double Ht = H;
    std::vector<double> gt;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t c = 0; c < g.size(); ++c) trial.points[c] = X.points[c] - alpha * g[c];
      Ht = hamiltonian(trial, model.V, model.kernel);
      if (Ht <= H - 1e-4 * alpha * gg) {
        ok = true;
        gt = gradient(trial);
        break;
      }
      if (std::abs(Ht - H) <= noise) {
        gt = gradient(trial);
        if (sup_abs(gt) < res.grad_norm) {
          ok = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!ok) {
      if (res.grad_norm < 1e3 * opt.tol) break;
      throw ConvergenceError("minimize_energy: line search failed", res.energy_history);
    }
    xprev = X.points;
    gprev = g;
    std::swap(X.points, trial.points);
    H = Ht;
    g = std::move(gt);
    res.energy_history.push_back(H);
    res.iterations = it + 1;
  }
  res.grad_norm = sup_abs(g);
  res.energy = H;
  res.min_gap_scaled = X.min_gap() * std::pow(N, 1.0 / model.kernel.d);
  try {
    const EquilibriumResult eq = analytic_equilibrium(model.V, model.kernel);
    double mz = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < X.size(); ++i) mz = std::max(mz, zeta(X.point(i), eq, model.V));
    res.max_zeta = mz;
  } catch (const DomainError&) {
  }
  return res;
}

void write_checkpoint(std::ostream& os, const Configuration& X, std::size_t step, double beta,
                      std::uint64_t seed) {
  os.precision(17);
  os << "# riesz-checkpoint\n";
  os << "dim,N,step,beta,seed\n";
  os << X.d << "," << X.size() << "," << step << "," << beta << "," << seed << "\n";
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (int a = 0; a < X.d; ++a) os << (a ? "," : "") << X.points[i * X.d + a];
    os << "\n";
  }
}

Configuration read_checkpoint(std::istream& is, std::size_t* step, double* beta, std::uint64_t* seed) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# riesz-checkpoint", 0) != 0) {
    throw DomainError("checkpoint: missing header");
  }
  std::getline(is, line);
  if (line != "dim,N,step,beta,seed") throw DomainError("checkpoint: bad column header");
  std::getline(is, line);
  std::stringstream ss(line);
  std::string f;
  std::vector<std::string> v;
  while (std::getline(ss, f, ',')) v.push_back(f);
  if (v.size() != 5) throw DomainError("checkpoint: bad values row");
  const int d = std::stoi(v[0]);
  const std::size_t N = std::stoull(v[1]);
  if (step) *step = std::stoull(v[2]);
  if (beta) *beta = std::stod(v[3]);
  if (seed) *seed = std::stoull(v[4]);
  std::vector<double> pts;
  pts.reserve(N * d);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    while (std::getline(ls, f, ',')) pts.push_back(std::stod(f));
  }
  if (pts.size() != N * d) throw DomainError("checkpoint: point count does not match header");
  return Configuration(d, std::move(pts));
}

}  // namespace riesz
