#include "riesz/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "json.hpp"
#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/rng.hpp"
#include "riesz/sampler.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

double bump0(double u2) { return u2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u2)) : 0.0; }

// d/du of bump0 along the radius.
double bump0_prime(double u) {
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  const double q = 1.0 - u2;
  return -2.0 * u / (q * q) * bump0(u2);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double sample_variance(const std::vector<double>& v, double* mean_out = nullptr) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  if (mean_out) *mean_out = mean;
  return v.size() > 1 ? ss / (n - 1.0) : 0.0;
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

TestFunction TestFunction::bump(std::vector<double> center, double scale, double amplitude) {
  if (center.empty() || !(scale > 0.0)) throw DomainError("bump: need a center and scale > 0");
  TestFunction f;
  f.name_ = "bump";
  f.smoothness_ = "C-infinity";
  f.center_ = std::move(center);
  f.scale_ = scale;
  f.support_ = scale;
  f.amplitude_ = amplitude;
  f.radial_bump_ = true;
  return f;
}

TestFunction TestFunction::custom(std::string name, int d, std::function<double(std::span<const double>)> value,
                                  std::function<void(std::span<const double>, std::span<double>)> gradient,
                                  std::vector<double> center, double support_radius) {
  if (static_cast<int>(center.size()) != d || !(support_radius > 0.0)) {
    throw DomainError("custom test function: bad center or support");
  }
  TestFunction f;
  f.name_ = std::move(name);
  f.smoothness_ = "user";
  f.center_ = std::move(center);
  f.scale_ = support_radius;
  f.support_ = support_radius;
  f.value_ = std::move(value);
  f.gradient_ = std::move(gradient);
  return f;
}

double TestFunction::value(std::span<const double> x) const {
  if (!radial_bump_) return dist(x, center_) > support_ ? 0.0 : value_(x);
  double u2 = 0.0;
  for (std::size_t a = 0; a < center_.size(); ++a) {
    const double u = (x[a] - center_[a]) / scale_;
    u2 += u * u;
  }
  return amplitude_ * bump0(u2);
}

void TestFunction::gradient(std::span<const double> x, std::span<double> out) const {
  const int d = dim();
  if (!radial_bump_) {
    if (dist(x, center_) > support_) {
      std::fill(out.begin(), out.begin() + d, 0.0);
      return;
    }
    gradient_(x, out);
    return;
  }
  const double r = dist(x, center_);
  if (r == 0.0 || r >= scale_) {
    std::fill(out.begin(), out.begin() + d, 0.0);
    return;
  }
  const double dr = amplitude_ * bump0_prime(r / scale_) / scale_;
  for (int a = 0; a < d; ++a) out[a] = dr * (x[a] - center_[a]) / r;
}

TestFunction TestFunction::rescaled(double factor) const {
  if (!radial_bump_) throw DomainError("rescaled: only the radial bump has a scale family");
  return bump(center_, scale_ * factor, amplitude_);
}

double TestFunction::dirichlet_energy(double* error) const {
  const int d = dim();
  if (radial_bump_) {
    // |S^{d-1}| scale^{d-2} int_0^1 bump0'(u)^2 u^{d-1} du.
    auto f = [&](double u) {
      const double p = bump0_prime(u);
      return p * p * std::pow(u, d - 1);
    };
    const double pref = amplitude_ * amplitude_ * sphere_area(d) * std::pow(scale_, d - 2);
    const double fine = integrate_adaptive(f, 0.0, 1.0, 1e-14);
    if (error) {
      const Rule1D r = gauss_legendre(48, 0.0, 1.0);
      double coarse = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) coarse += r.weights[i] * f(r.nodes[i]);
      *error = pref * std::abs(fine - coarse);
    }
    return pref * fine;
  }
  // Tensor Gauss-Legendre over the bounding cube at two orders.
  auto tensor = [&](int n) {
    const Rule1D r = gauss_legendre(n, -support_, support_);
    std::vector<int> idx(d, 0);
    std::vector<double> x(d), g(d);
    double sum = 0.0;
    while (true) {
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        x[a] = center_[a] + r.nodes[idx[a]];
        w *= r.weights[idx[a]];
      }
      gradient(x, g);
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      sum += w * g2;
      int a = d - 1;
      while (a >= 0 && idx[a] == n - 1) idx[a--] = 0;
      if (a < 0) break;
      ++idx[a];
    }
    return sum;
  };
  const int n = d == 1 ? 400 : (d == 2 ? 160 : 48);
  const double fine = tensor(n);
  if (error) *error = std::abs(fine - tensor(n / 2));
  return fine;
}

double TestFunction::moment(const Density& mu, int p) const {
  if (p != 1 && p != 2) throw DomainError("moment: p must be 1 or 2");
  const int d = dim();
  if (mu.dim() != d) throw DomainError("moment: dimension mismatch");
  if (radial_bump_ && mu.kind() == DensityKind::UniformBall &&
      dist(center_, mu.center()) + scale_ <= mu.radius()) {
    // Constant density on the support of xi: exact radial integral.
    auto f = [&](double u) { return std::pow(bump0(u * u), p) * std::pow(u, d - 1); };
    const double rho = mu.value(center_);
    return rho * std::pow(amplitude_, p) * sphere_area(d) * std::pow(scale_, d) * integrate_adaptive(f, 0.0, 1.0, 1e-14);
  }
  const WeightedNodes q = mu.quadrature(d == 1 ? 400 : 128);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(value(q.point(i)), p);
  return sum;
}

void SampleEnsemble::add(Configuration X, std::uint64_t seed) {
  if (!samples.empty() && (X.d != samples.front().d || X.size() != samples.front().size())) {
    throw DomainError("ensemble: samples must share d and N");
  }
  samples.push_back(std::move(X));
  seeds.push_back(seed);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SampleEnsemble ginibre_ensemble(std::size_t N, std::size_t M, std::uint64_t seed, unsigned threads) {
  std::vector<Configuration> out(M);
  parallel_for(M, threads, [&](std::size_t m) { out[m] = ginibre_sample(N, seed + m); });
  SampleEnsemble ens;
  ens.sampler = "ginibre";
  for (std::size_t m = 0; m < M; ++m) ens.add(std::move(out[m]), seed + m);
  return ens;
}

SampleEnsemble hermite_ensemble(std::size_t N, double beta, std::size_t M, std::uint64_t seed, unsigned threads) {
  std::vector<Configuration> out(M);
  parallel_for(M, threads, [&](std::size_t m) { out[m] = hermite_beta_sample(N, beta, seed + m); });
  SampleEnsemble ens;
  ens.sampler = "hermite";
  for (std::size_t m = 0; m < M; ++m) ens.add(std::move(out[m]), seed + m);
  return ens;
}

SampleEnsemble iid_ensemble(const Density& mu, std::size_t N, std::size_t M, std::uint64_t seed) {
  SampleEnsemble ens;
  ens.sampler = "iid";
  for (std::size_t m = 0; m < M; ++m) {
    Rng rng(seed + m, 0x11dULL);
    ens.add(Configuration(mu.dim(), mu.sample_points(rng, N)), seed + m);
  }
  return ens;
}

SampleEnsemble poisson_ensemble(const Density& mu, double N, std::size_t M, std::uint64_t seed) {
  if (!(N > 0.0)) throw DomainError("poisson_ensemble: intensity must be positive");
  SampleEnsemble ens;
  ens.sampler = "poisson";
  for (std::size_t m = 0; m < M; ++m) {
    Rng rng(seed + m, 0x9015ULL);
    std::poisson_distribution<std::size_t> count(N);
    const std::size_t n = count(rng);
    Configuration X(mu.dim(), mu.sample_points(rng, n));
    // A Poisson sample may have any size; bypass the homogeneity check.
    ens.samples.push_back(std::move(X));
    ens.seeds.push_back(seed + m);
  }
  return ens;
}

double discrepancy(const Configuration& X, double expected, std::span<const double> center, double R) {
  std::size_t inside = 0;
  for (std::size_t i = 0; i < X.size(); ++i) inside += dist(X.point(i), center) < R;
  return static_cast<double>(inside) - expected;
}

double discrepancy(const Configuration& X, const Density& mu, std::span<const double> center, double R) {
  return discrepancy(X, static_cast<double>(X.size()) * mu.ball_mass(center, R), center, R);
}

double fluct(const Configuration& X, double mean, const TestFunction& xi) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) s += xi.value(X.point(i));
  return s - static_cast<double>(X.size()) * mean;
}

double fluct(const Configuration& X, const Density& mu, const TestFunction& xi) {
  return fluct(X, xi.moment(mu), xi);
}

NormalityTest normality_test(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n < 8) throw DomainError("normality_test: need at least 8 values");
  double mean = 0.0;
  const double sd = std::sqrt(sample_variance(x, &mean));
  if (!(sd > 0.0)) throw DomainError("normality_test: zero variance");
  std::sort(x.begin(), x.end());
  const double nn = static_cast<double>(n);
  std::vector<double> F(n);
  for (std::size_t i = 0; i < n; ++i) {
    F[i] = std::clamp(std_normal_cdf((x[i] - mean) / sd), 1e-300, 1.0 - 1e-16);
  }
  NormalityTest t;
  double A = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    A += (2.0 * i + 1.0) * (std::log(F[i]) + std::log1p(-F[n - 1 - i]));
  }
  A = -nn - A / nn;
  A *= 1.0 + 0.75 / nn + 2.25 / (nn * nn);
  t.ad_statistic = A;
  // D'Agostino-Stephens approximation for estimated parameters.
  if (A >= 0.6) {
    t.ad_pvalue = std::exp(1.2937 - 5.709 * A + 0.0186 * A * A);
  } else if (A >= 0.34) {
    t.ad_pvalue = std::exp(0.9177 - 4.279 * A - 1.38 * A * A);
  } else if (A >= 0.2) {
    t.ad_pvalue = 1.0 - std::exp(-8.318 + 42.796 * A - 59.938 * A * A);
  } else {
    t.ad_pvalue = 1.0 - std::exp(-13.436 + 101.14 * A - 223.73 * A * A);
  }
  t.ad_pvalue = std::clamp(t.ad_pvalue, 0.0, 1.0);

  double D = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    D = std::max({D, (i + 1.0) / nn - F[i], F[i] - i / nn});
  }
  t.ks_statistic = D;
  // Dallal-Wilkinson approximation to the Lilliefors tail; accurate below 0.1.
  double Kd = D, nd = nn;
  if (n > 100) {
    Kd = D * std::pow(nn / 100.0, 0.49);
    nd = 100.0;
  }
  const double p = std::exp(-7.01256 * Kd * Kd * (nd + 2.78019) + 2.99587 * Kd * std::sqrt(nd + 2.78019) - 0.122119 +
                            0.974598 / std::sqrt(nd) + 1.67997 / nd);
  t.ks_pvalue = std::clamp(p, 0.0, 1.0);
  return t;
}

double predicted_fluct_variance(int d, double beta, std::size_t N, const TestFunction& xi, double* error) {
  if (d != 1 && d != 2) throw DomainError("predicted_fluct_variance: limit law available for d = 1, 2 only");
  if (!(beta > 0.0)) throw DomainError("predicted_fluct_variance: beta must be positive");
  double err = 0.0;
  const double D = xi.dirichlet_energy(&err);
  // -g'' = c_d delta for g = -|x| in 1D (c_1 = 2), -log|x| in 2D (c_2 = 2 pi)
  const double cd = d == 1 ? 2.0 : coulomb_constant(2);
  const double pref = std::pow(static_cast<double>(N), 1.0 - 2.0 / d) / (beta * cd);
  if (error) *error = pref * err;
  return pref * D;
}

double bulk_distance(const Density& mu, const TestFunction& xi) {
  if (mu.dim() != xi.dim()) throw DomainError("bulk_distance: dimension mismatch");
  if (mu.kind() != DensityKind::Gridded) {
    return mu.radius() - dist(xi.center(), mu.center()) - xi.support_radius();
  }
  // Nearest grid node outside the support.
  const GridSpec& g = mu.grid();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> x(g.d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mu.values()[i] > 0.0) continue;
    g.node(i, x);
    best = std::min(best, dist(x, xi.center()));
  }
  return best - xi.support_radius();
}

CltReport clt_harness(const SampleEnsemble& ens, const Density& mu, const TestFunction& xi, double beta,
                      bool predict) {
  if (ens.size() == 0) throw DomainError("clt_harness: empty ensemble");
  CltReport rep;
  rep.M = ens.size();
  rep.N = ens.N();
  rep.d = ens.dim();
  rep.beta = beta;
  rep.bulk_distance = bulk_distance(mu, xi);
  const double diam = 2.0 * mu.radius();
  if (rep.bulk_distance < 0.1 * diam) {
    throw DomainError("clt_harness: supp xi must stay 0.1 diam(supp mu) away from the boundary");
  }
  if (rep.M < 50) rep.warnings.push_back("under-powered ensemble: M < 50");
  const double m1 = xi.moment(mu, 1);
  const double m2 = xi.moment(mu, 2);
  rep.iid_variance = static_cast<double>(rep.N) * (m2 - m1 * m1);
  rep.values.reserve(rep.M);
  for (const auto& X : ens.samples) rep.values.push_back(fluct(X, m1, xi));
  rep.variance = sample_variance(rep.values, &rep.mean);
  // Var of the sample variance from the fourth central moment.
  double m4 = 0.0;
  for (double v : rep.values) m4 += std::pow(v - rep.mean, 4);
  m4 /= static_cast<double>(rep.M);
  const double Mf = static_cast<double>(rep.M);
  rep.variance_stderr = std::sqrt(std::max(0.0, (m4 - (Mf - 3.0) / (Mf - 1.0) * rep.variance * rep.variance) / Mf));
  if (rep.M >= 8 && rep.variance > 0.0) rep.normality = normality_test(rep.values);
  rep.predicted_variance = std::numeric_limits<double>::quiet_NaN();
  rep.ratio = std::numeric_limits<double>::quiet_NaN();
  if (predict) {
    rep.predicted_variance = predicted_fluct_variance(rep.d, beta, rep.N, xi, &rep.predicted_error);
    rep.ratio = rep.variance / rep.predicted_variance;
    rep.matches_prediction = rep.ratio >= 0.75 && rep.ratio <= 1.25;
    if (!rep.matches_prediction) rep.warnings.push_back("variance does not match the limit law");
  }
  return rep;
}

void CltReport::write_json(std::ostream& os) const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["M"] = M;
  j["N"] = N;
  j["d"] = d;
  j["beta"] = beta;
  j["mean"] = mean;
  j["variance"] = variance;
  j["variance_stderr"] = variance_stderr;
  j["predicted_variance"] = num(predicted_variance);
  j["predicted_error"] = predicted_error;
  j["ratio"] = num(ratio);
  j["iid_variance"] = iid_variance;
  j["ad_statistic"] = normality.ad_statistic;
  j["ad_pvalue"] = normality.ad_pvalue;
  j["ks_statistic"] = normality.ks_statistic;
  j["ks_pvalue"] = normality.ks_pvalue;
  j["bulk_distance"] = bulk_distance;
  j["matches_prediction"] = matches_prediction;
  j["warnings"] = warnings;
  os << j.dump(2) << "\n";
}

NumberVarianceCurve number_variance_curve(const SampleEnsemble& ens, const Density& mu,
                                          const std::vector<double>& radii, std::span<const double> center,
                                          double count_lo, double count_hi) {
  if (ens.size() < 2) throw DomainError("number_variance_curve: need at least 2 samples");
  NumberVarianceCurve c;
  c.radii = radii;
  std::vector<double> xs, ys;
  for (double R : radii) {
    std::vector<double> counts;
    counts.reserve(ens.size());
    for (const auto& X : ens.samples) counts.push_back(discrepancy(X, 0.0, center, R));
    const double Nmean = static_cast<double>(ens.N()) * mu.ball_mass(center, R);
    const double var = sample_variance(counts);
    c.mean_counts.push_back(Nmean);
    c.variances.push_back(var);
    if (Nmean >= count_lo && Nmean <= count_hi && var > 0.0) {
      xs.push_back(std::log(Nmean));
      ys.push_back(std::log(var));
    }
  }
  c.fit_points = xs.size();
  if (xs.size() < 2) throw DomainError("number_variance_curve: fewer than 2 radii in the count window");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  c.slope = sxy / sxx;
  if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - my - c.slope * (xs[i] - mx);
      rss += e * e;
    }
    c.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return c;
}

void NumberVarianceCurve::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "R,mean_count,variance\n";
  for (std::size_t i = 0; i < radii.size(); ++i) os << radii[i] << "," << mean_counts[i] << "," << variances[i] << "\n";
}

Configuration local_field(const Configuration& X, std::span<const double> center, double window) {
  const int d = X.d;
  if (static_cast<int>(center.size()) != d) throw DomainError("local_field: dimension mismatch");
  if (!(window > 0.0)) throw DomainError("local_field: window must be positive");
  const double scale = std::pow(static_cast<double>(X.size()), 1.0 / d);
  std::vector<double> out;
  std::vector<double> y(d);
  for (std::size_t i = 0; i < X.size(); ++i) {
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      y[a] = scale * (X.point(i)[a] - center[a]);
      inside &= std::abs(y[a]) <= 0.5 * window;
    }
    if (inside) out.insert(out.end(), y.begin(), y.end());
  }
  return Configuration(d, std::move(out));
}

}  // namespace riesz
