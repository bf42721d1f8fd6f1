#pragma once

#include <functional>
#include <span>
#include <vector>

#include "riesz/density.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/kernels.hpp"
#include "riesz/potential.hpp"

namespace riesz {

// N points in R^d stored flat (stride d).
struct Configuration {
  int d = 1;
  std::vector<double> points;

  Configuration() = default;
  Configuration(int dim, std::vector<double> pts);

  std::size_t size() const { return d > 0 ? points.size() / d : 0; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * d, static_cast<std::size_t>(d)}; }
  std::span<double> point(std::size_t i) { return {points.data() + i * d, static_cast<std::size_t>(d)}; }

  double min_gap() const;
  bool simple() const { return min_gap() > 0.0; }
  void translate(std::span<const double> shift);
  void scale(double t);
};

// sum_{i<j} g(x_i - x_j), i.e. half the off-diagonal double sum.
double pair_energy(const Configuration& X, const RieszKernel& k);

// H_N = 1/2 sum_{i != j} g + N sum V(x_i). +inf on coincident points (s >= 0).
double hamiltonian(const Configuration& X, const Potential& V, const RieszKernel& k);

// F_N(X, mu) = 1/2 sum_{i!=j} g - N sum h^mu(x_i) + N^2/2 int int g dmu dmu
// for a probability density mu.
double modulated_energy(const Configuration& X, const Density& mu, const RieszKernel& k);

// Same with a background of arbitrary mass:  pair - sum h^nu + 1/2 nu(g) nu.
double modulated_energy_background(const Configuration& X, const Density& nu, const RieszKernel& k);

// F_N + (N/2d) log(N |mu|_inf) 1_{s=0}: the combination bounded below by
// -C |mu|_inf^{s/d} N^{1+s/d}.
double renormalized_modulated_energy(const Configuration& X, const Density& mu, const RieszKernel& k);

// r_i = 1/4 min(min_{j != i} |x_i - x_j|, lambda).
std::vector<double> nn_radii(const Configuration& X, double lambda);
// lambda = (N |mu|_inf)^{-1/d}.
double default_lambda(std::size_t N, const Density& mu);

// |H_N - (N^2 E(mu_V) + N sum zeta(x_i) + F_N(X, mu_V))|.
double splitting_residual(const Configuration& X, const EquilibriumResult& eq, const Potential& V);

// |H_N - (N^2 E_theta(mu) - (N/theta) sum log mu(x_i) + F_N(X, mu))|.
double thermal_splitting_residual(const Configuration& X, const Density& mu_theta, const Potential& V,
                                  const RieszKernel& k, double theta);

// |N^{-s/d}(F_N(X, mu) + (N/2d) log N 1_{s=0}) - F(N^{1/d} X, mu(. N^{-1/d}))|.
// `relative` divides by |F_N|.
double blowup_scaling_residual(const Configuration& X, const Density& mu, const RieszKernel& k,
                               bool relative = false);

// Velocity field with Jacobian. lipschitz must bound |grad v|_inf.
struct TransportField {
  int d = 1;
  std::function<void(std::span<const double>, std::span<double>)> v;
  std::function<void(std::span<const double>, std::span<double>)> jacobian;  // row-major d x d
  double lipschitz = 0.0;
  std::vector<double> box_lower, box_upper;  // support bounding box (empty = all of R^d)

  static TransportField constant(std::vector<double> b);
  // v(x) = A x + b with A row-major d x d.
  static TransportField affine(int d, std::vector<double> A, std::vector<double> b);
  // v_a(x) = amp * sum_b sin(k_ab x_b + phase_ab) with coefficients from seed.
  static TransportField trigonometric(int d, double amp, std::uint64_t seed);

  std::vector<double> at(std::span<const double> x) const;
};

// Straight-line push-forward Phi_t = I + t v applied to points.
Configuration push_forward(const Configuration& X, const TransportField& v, double t);

// Flow map of x' = v(x) over time t by classical RK4 with `steps` steps.
std::vector<double> flow_map(const TransportField& v, std::span<const double> x, double t, int steps = 16);

// A_n = 1/2 int int_{x != y} D^n g(x-y) : (v(x)-v(y))^{(x)n} d(sum delta - N mu)^{(x)2}
// for n in {1, 2}. mu enters through its quadrature of the given order.
double a_n(const Configuration& X, const Density& mu, const TransportField& v, int n,
           const RieszKernel& k, int quad_order = 32);

// F_N((I + t v) X, (I + t v)#mu) - F_N(X, mu), computed pair by pair on the
// same quadrature nodes so that its t-derivatives at 0 are exactly A_n.
double transported_increment(const Configuration& X, const Density& mu, const TransportField& v,
                             double t, const RieszKernel& k, int quad_order = 32);

// |A_1| / (|grad v|_inf (F_N + (N/2d) log(N|mu|_inf) 1_{s=0} + N^{1+s/d}|mu|_inf^{s/d})).
double commutator_ratio(const Configuration& X, const Density& mu, const TransportField& v,
                        const RieszKernel& k, int quad_order = 32);

}  // namespace riesz
