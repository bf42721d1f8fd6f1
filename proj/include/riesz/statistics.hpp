#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "riesz/density.hpp"
#include "riesz/modenergy.hpp"

namespace riesz {

// Compactly supported test function. The radial bump is
// xi(x) = amplitude * exp(1 - 1 / (1 - |u|^2)) with u = (x - center) / scale,
// supported in the closed ball B(center, scale).
class TestFunction {
 public:
  static TestFunction bump(std::vector<double> center, double scale, double amplitude = 1.0);
  // User function with gradient, supported in B(center, support_radius).
  static TestFunction custom(std::string name, int d, std::function<double(std::span<const double>)> value,
                             std::function<void(std::span<const double>, std::span<double>)> gradient,
                             std::vector<double> center, double support_radius);

  int dim() const { return static_cast<int>(center_.size()); }
  const std::string& name() const { return name_; }
  const std::string& smoothness() const { return smoothness_; }
  const std::vector<double>& center() const { return center_; }
  double scale() const { return scale_; }
  double support_radius() const { return support_; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;

  // Same shape at scale * factor about the same center.
  TestFunction rescaled(double factor) const;

  // int |grad xi|^2 dx with an error estimate from two quadrature orders.
  double dirichlet_energy(double* error = nullptr) const;
  // int xi^p dmu (p = 1, 2).
  double moment(const Density& mu, int p = 1) const;

 private:
  std::string name_;
  std::string smoothness_;
  std::vector<double> center_;
  double scale_ = 1.0;
  double support_ = 1.0;
  double amplitude_ = 1.0;
  bool radial_bump_ = false;
  std::function<double(std::span<const double>)> value_;
  std::function<void(std::span<const double>, std::span<double>)> gradient_;
};

struct SampleEnsemble {
  std::vector<Configuration> samples;
  std::vector<std::uint64_t> seeds;
  std::string sampler;

  void add(Configuration X, std::uint64_t seed);
  std::size_t size() const { return samples.size(); }
  int dim() const { return samples.empty() ? 0 : samples.front().d; }
  std::size_t N() const { return samples.empty() ? 0 : samples.front().size(); }
};

// Deterministic map over [0, n) on up to `threads` threads; results are in
// index order regardless of scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// Sample m uses seed + m.
SampleEnsemble ginibre_ensemble(std::size_t N, std::size_t M, std::uint64_t seed, unsigned threads = 1);
SampleEnsemble hermite_ensemble(std::size_t N, double beta, std::size_t M, std::uint64_t seed, unsigned threads = 1);
// N i.i.d. points from mu per sample.
SampleEnsemble iid_ensemble(const Density& mu, std::size_t N, std::size_t M, std::uint64_t seed);
// Poisson process of intensity N mu: a Poisson(N) number of i.i.d. points.
SampleEnsemble poisson_ensemble(const Density& mu, double N, std::size_t M, std::uint64_t seed);

// #{x_i in B(center, R)} - N mu(B(center, R)).
double discrepancy(const Configuration& X, const Density& mu, std::span<const double> center, double R);
// Same with the reference count N mu(B) given.
double discrepancy(const Configuration& X, double expected, std::span<const double> center, double R);

// sum xi(x_i) - N int xi dmu; `mean` is int xi dmu when already known.
double fluct(const Configuration& X, const Density& mu, const TestFunction& xi);
double fluct(const Configuration& X, double mean, const TestFunction& xi);

struct NormalityTest {
  double ad_statistic = 0.0;  // Anderson-Darling A^2 with the small-sample factor
  double ad_pvalue = 0.0;
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;  // Lilliefors (estimated mean and variance)
};

// Normality of a sample with estimated mean and variance.
NormalityTest normality_test(std::vector<double> sample);

struct CltReport {
  std::size_t M = 0;
  std::size_t N = 0;
  int d = 0;
  double beta = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
  double predicted_variance = 0.0;  // NaN without a limit law for this kernel
  double predicted_error = 0.0;     // quadrature error of the prediction
  double ratio = 0.0;               // variance / predicted_variance
  double iid_variance = 0.0;        // N (int xi^2 - (int xi)^2) dmu
  NormalityTest normality;
  double bulk_distance = 0.0;  // dist(supp xi, boundary of supp mu)
  bool matches_prediction = false;  // ratio in [0.75, 1.25]
  std::vector<std::string> warnings;
  std::vector<double> values;  // Fluct per sample

  void write_json(std::ostream& os) const;
};

// Limit variance of Fluct(xi) for the Coulomb gas, d in {1, 2}:
// N^{1 - 2/d} (1/(beta c_d)) int |grad xi|^2 (c_1 = 2, c_2 = 2 pi).
double predicted_fluct_variance(int d, double beta, std::size_t N, const TestFunction& xi, double* error = nullptr);

// Distance from supp xi to the boundary of supp mu (negative on overlap).
double bulk_distance(const Density& mu, const TestFunction& xi);

// Requires dist(supp xi, boundary) >= 0.1 diam(supp mu) (DomainError
// otherwise); M < 50 adds a warning. predict = false skips the limit law.
CltReport clt_harness(const SampleEnsemble& ens, const Density& mu, const TestFunction& xi, double beta,
                      bool predict = true);

struct NumberVarianceCurve {
  std::vector<double> radii;
  std::vector<double> mean_counts;
  std::vector<double> variances;
  double slope = 0.0;  // d log Var / d log E[count] over the fit window
  double slope_stderr = 0.0;
  std::size_t fit_points = 0;

  void write_csv(std::ostream& os) const;
};

// Count variance in B(center, R) per radius; the slope is fitted over the
// radii whose expected count N mu(B) lies in [count_lo, count_hi].
NumberVarianceCurve number_variance_curve(const SampleEnsemble& ens, const Density& mu,
                                          const std::vector<double>& radii, std::span<const double> center,
                                          double count_lo = 10.0, double count_hi = 100.0);

// {N^{1/d} (x_i - center)} restricted to the cube of side `window`
// centred at the origin.
Configuration local_field(const Configuration& X, std::span<const double> center, double window);

}  // namespace riesz
