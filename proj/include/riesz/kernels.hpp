#pragma once

#include <span>
#include <vector>

namespace riesz {

// Interaction g(x) = -log|x| (s = 0) or |x|^{-s}/s, restricted to the
// super-Coulombic range d-2 <= s < d.
struct RieszKernel {
  int d = 2;
  double s = 0.0;

  // Validating constructor; throws DomainError outside the range.
  static RieszKernel make(int d, double s);

  bool is_log() const noexcept { return s == 0.0; }
  bool is_coulomb() const noexcept { return s == d - 2; }
  // 1D Coulomb and other s < 0 kernels are continuous at the origin.
  bool singular_at_origin() const noexcept { return s >= 0.0; }
};

// Radial profile of g. r = 0 returns +inf for s >= 0 (and 0 for s < 0);
// hot loops rely on this instead of exceptions.
double eval_g(const RieszKernel& k, double r);
double eval_g(const RieszKernel& k, std::span<const double> x);

// Throws SingularError at r = 0 when s >= 0.
double eval_g_checked(const RieszKernel& k, std::span<const double> x);

// dg/dr and d^2g/dr^2.
double g_prime(const RieszKernel& k, double r);
double g_second(const RieszKernel& k, double r);

// grad g(x) written into out (size d).
void grad_g(const RieszKernel& k, std::span<const double> x, std::span<double> out);

// Hessian contraction  D^2 g(x) : (w (x) w).
double hess_g_contract(const RieszKernel& k, std::span<const double> x,
                       std::span<const double> w);

// c_d with -Delta g = c_d delta_0: 2 pi for d = 2, |S^{d-1}| for d >= 3.
double coulomb_constant(int d);

// Three-case normalization constant c_{d,s}. In the strictly Riesz branch
// s > max(0, d-2) the Gamma formula normalizes the bare power |x|^{-s}.
double riesz_constant(int d, double s);

// Surface area of the unit sphere S^{d-1}.
double sphere_area(int d);

// Truncations: f_eta = (g - g(eta))_+ and g_eta = g - f_eta.
// For s < 0 there is no singularity and eta = 0 is allowed (f_0 = 0).
double eval_f_eta(const RieszKernel& k, double r, double eta);
double eval_g_eta(const RieszKernel& k, double r, double eta);

// Uniform unit-mass measure on the sphere of radius eta about center.
struct SmearedCharge {
  std::vector<double> center;
  double radius = 1.0;
};

// Quadrature of y -> g(x - y) against a smeared charge (d = 2 or 3).
// d = 2 uses the periodic trapezoid rule with `nodes` points; d = 3 uses
// Gauss-Legendre in cos(polar) x trapezoid in azimuth with nodes x 2*nodes.
double smeared_potential(const RieszKernel& k, const SmearedCharge& charge,
                         std::span<const double> x, int nodes = 96);

}  // namespace riesz
