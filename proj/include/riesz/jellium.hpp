#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riesz/modenergy.hpp"

namespace riesz {

// Lattice sum_i n_i b_i with the basis vectors b_i as the columns of `basis`.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);

  // Z^d scaled to the given covolume.
  static Lattice hypercubic(int d, double covolume = 1.0);
  // Triangular lattice of the given covolume.
  static Lattice triangular(double covolume = 1.0);
  // Lattice spanned by (1, 0) and (Re tau, Im tau), scaled to the covolume.
  static Lattice from_tau(std::complex<double> tau, double covolume = 1.0);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  // Columns b*_i with b*_i . b_j = delta_ij.
  const Eigen::MatrixXd& dual() const { return dual_; }
  double covolume() const { return covolume_; }
  double shortest_vector() const { return shortest_; }

  // x minus the lattice vector nearest in basis coordinates.
  Eigen::VectorXd reduce(std::span<const double> x) const;
  // Point in the fundamental parallelotope [0,1)^d in basis coordinates.
  void wrap(std::span<double> x) const;
  Lattice dilated(double t) const;

  std::string to_json() const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd dual_;
  Eigen::MatrixXd inverse_;
  double covolume_;
  double shortest_;
};

// Points on the torus R^d / Lattice with unit background density, so the
// covolume equals the number of points.
struct TorusConfig {
  Lattice lattice;
  Configuration X;

  TorusConfig(Lattice L, Configuration pts);
  std::size_t size() const { return X.size(); }
};

// Constant c with g ~ c G at the origin for the torus Green function G:
// 2 pi for d = 1, s = 0, and the fractional Laplacian constant otherwise.
double torus_constant(int d, double s);

// G(x) = -(1/2 pi) log|2 sin(pi x / N)| on R / NZ.
double green_1d_log(double x, double N);

struct EwaldOptions {
  double split = 1.0;     // split time = split * V^{2/d} / (4 pi)
  double exponent = 40.0;  // initial cutoff: terms below exp(-exponent)
  double shell_tol = 1e-12;
  double max_exponent = 400.0;
};

// Zero-mean solution of (-Delta)^{(d-s)/2} G = delta - 1/V on the torus
// (the 1D log case uses green_1d_log). Throws SingularError on lattice
// points and ToleranceError when the last shell exceeds shell_tol even at
// max_exponent.
double green_periodic(const Lattice& L, double s, std::span<const double> x, const EwaldOptions& opt = {});

// grad G, same conventions.
void green_periodic_gradient(const Lattice& L, double s, std::span<const double> x, std::span<double> out,
                             const EwaldOptions& opt = {});

// P = c G and lim (P - g) by Ewald summation in every case, including
// d = 1, s = 0 where the explicit formula is used elsewhere.
double periodic_kernel_ewald(const Lattice& L, double s, std::span<const double> x, const EwaldOptions& opt = {});
double periodic_kernel_self_ewald(const Lattice& L, double s, const EwaldOptions& opt = {});

// lim_{x -> 0} (G(x) - g(x) / torus_constant).
double madelung(const Lattice& L, double s, const EwaldOptions& opt = {});

// W = (c/2N) sum_{i != j} G(a_i - a_j) + (c/2) madelung, c = torus_constant.
// +inf on coincident points.
double W_periodic(const TorusConfig& cfg, double s, const EwaldOptions& opt = {});
// Gradient of W in the point positions, stride d.
std::vector<double> W_periodic_gradient(const TorusConfig& cfg, double s, const EwaldOptions& opt = {});

struct ScanRow {
  double tau_re = 0.0;
  double tau_im = 0.0;
  double W = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> table;
  std::complex<double> argmin;
  double W_min = 0.0;
  // Grid resolution around the argmin: the optimum is only located to
  // within these half-widths.
  double dre = 0.0;
  double dim = 0.0;

  void write_csv(std::ostream& os) const;
};

// W of the unimodular lattice Lambda_tau (one point per cell).
double lattice_energy_2d(std::complex<double> tau, double s, const EwaldOptions& opt = {});

// Scan of Re tau in [0, 1/2] and Im tau in [sqrt(3)/2, im_max] with `grid`
// nodes per axis, skipping |tau| < 1. Re tau < 0 is covered by the
// reflection tau -> -conj(tau).
ScanResult lattice_scan_2d(int grid, double s, double im_max = 1.5, const EwaldOptions& opt = {});

struct TorusOptimizeOptions {
  double tol = 1e-10;  // on the sup norm of grad W
  std::size_t max_iter = 20000;
};

struct TorusOptimizeResult {
  TorusConfig config;
  double W = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  std::vector<double> W_history;
};

// Gradient descent with Armijo backtracking on W, positions taken mod the
// lattice. Throws ConvergenceError on line-search failure.
TorusOptimizeResult optimize_torus(const TorusConfig& start, double s, const TorusOptimizeOptions& opt = {},
                                   const EwaldOptions& ewald = {});

}  // namespace riesz
