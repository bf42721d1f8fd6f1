#pragma once

#include <functional>
#include <span>
#include <vector>

#include "riesz/density.hpp"
#include "riesz/kernels.hpp"
#include "riesz/potential.hpp"

namespace riesz {

// on_support: sup |h^mu + V - c| over the support.
// off_support: smallest value of h^mu + V - c sampled off the support.
struct ResidualReport {
  double on_support = 0.0;
  double off_support = 0.0;
};

struct EquilibriumResult {
  Density density;
  RieszKernel kernel;
  Potential potential;
  double c = 0.0;
  double energy = 0.0;
  ResidualReport residual;
};

double potential_of_density(const Density& mu, const RieszKernel& k, std::span<const double> x);

// int V dmu; radial_poly uses exact moments.
double potential_energy(const Density& mu, const Potential& V);

// E(mu) = 1/2 int int g dmu dmu + int V dmu.
double energy_functional(const Density& mu, const Potential& V, const RieszKernel& k);

// Closed-form mu_V for V = c2 |x|^2 with a Coulomb kernel (uniform ball)
// or the 1D log kernel (semicircle). Anything else is a DomainError.
EquilibriumResult analytic_equilibrium(const Potential& V, const RieszKernel& k);

// Samples h^mu + V - c on and off the support: radial rays for analytic
// densities, grid nodes for gridded ones.
ResidualReport el_residual(const Density& mu, const Potential& V, const RieszKernel& k, double c,
                           int samples = 200);

// zeta = h^{mu_V} + V - c.
double zeta(std::span<const double> x, const EquilibriumResult& eq, const Potential& V);

struct ObstacleOptions {
  int n = 128;              // nodes per side, boundary included
  double half_width = 2.0;  // box [-L, L]^2
  double omega = 1.9;
  double tol = 1e-8;
  int max_sweeps = 100000;
  bool fixed_c = false;  // skip the mass loop and use c as given
  double c = 0.0;
  double mass_tol = 1e-10;
  // Dirichlet data; defaults to -log|x|.
  std::function<double(double, double)> boundary;
};

struct ObstacleResult {
  GridSpec grid;
  std::vector<double> h;
  std::vector<double> psi;
  std::vector<double> neg_laplacian;  // -Delta_h h at interior nodes, 0 on the boundary
  std::vector<unsigned char> coincidence;
  std::vector<double> mu;  // recovered measure (-Delta_h h)/(2 pi) on the coincidence set
  double c = 0.0;
  double mass = 0.0;
  double radius_max = 0.0;   // max |x| over coincidence nodes
  double radius_area = 0.0;  // sqrt(area / pi)
  double complementarity = 0.0;  // max |min(-Delta_h h, h - psi)|
  int sweeps = 0;
  int bisections = 0;
  bool touches_boundary = false;

  Density density() const;
};

// 2D log-gas obstacle problem min(-Delta h, h - psi) = 0, psi = c - V, by
// projected SOR on the 5-point Laplacian. Unless fixed_c is set, c is
// found by bisection so that the recovered mass is 1.
ObstacleResult obstacle_solve(const Potential& V, const ObstacleOptions& opt = {});

struct ThermalOptions {
  double tol = 1e-9;  // EL residual in potential units
  int max_iter = 50000;
  double alpha0 = 0.5;
  double alpha_min = 1e-7;
  double initial_theta = 2.0;  // width of the Gaussian start exp(-min(theta, this) V)
};

struct ThermalResult {
  Density density;
  double c_theta = 0.0;
  double el_residual = 0.0;
  double energy = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> energy_history;
};

// mu_theta by the damped log-space fixed point
//   log mu <- (1 - a) log mu + a log normalize(exp(-theta (V + g * mu))),
// with a halved whenever the residual or E_theta would increase.
ThermalResult thermal_equilibrium(const Potential& V, const RieszKernel& k, double theta,
                                  const GridSpec& grid, const ThermalOptions& opt = {});

// E_theta(mu) = E(mu) + (1/theta) int mu log mu.
double thermal_energy(const Density& mu, const Potential& V, const RieszKernel& k, double theta);

// Iterates f_0 = Delta V / c_d, f_{k+1} = f_0 + (1/(theta c_d)) Delta log f_k,
// evaluated with nested central differences of step `step`.
double f_iterate(const Potential& V, int d, double theta, int order, std::span<const double> x,
                 double step = 1e-3);

}  // namespace riesz
