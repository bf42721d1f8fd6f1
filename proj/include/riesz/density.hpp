#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "riesz/kernels.hpp"
#include "riesz/rng.hpp"

namespace riesz {

// Uniform node-centred grid: node (i0, i1, ...) sits at lower + i * spacing
// and owns the cell of side `spacing` around it. Values are row-major with
// the first coordinate slowest.
struct GridSpec {
  int d = 2;
  std::vector<double> lower;
  double spacing = 0.0;
  std::vector<int> shape;

  static GridSpec square(int d, double half_width, int n);

  std::size_t size() const;
  double cell_volume() const;
  void node(std::size_t index, std::span<double> out) const;
  std::vector<double> node(std::size_t index) const;
};

// Exact integral of g over the axis-aligned cube offset + [-h/2, h/2]^d.
// Available for d = 1 (any s) and for the 2D log kernel.
double cell_integral(const RieszKernel& k, std::span<const double> offset, double h);

// Weighted nodes; weights sum to the mass of the measure.
struct WeightedNodes {
  int d = 1;
  std::vector<double> points;  // flat, stride d
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * d, static_cast<std::size_t>(d)};
  }
};

enum class DensityKind { UniformBall, Semicircle, Gridded };

// Compactly supported density of finite mass: analytic (uniform ball or
// semicircle) or piecewise constant on a GridSpec.
class Density {
 public:
  static Density uniform_ball(int d, double radius, double mass = 1.0,
                              std::vector<double> center = {});
  static Density semicircle(double radius, double mass = 1.0);
  // Negative values are rejected. Mass is whatever the values integrate to.
  static Density gridded(GridSpec grid, std::vector<double> values);

  DensityKind kind() const noexcept { return kind_; }
  std::string kind_name() const;
  int dim() const noexcept { return d_; }
  double mass() const noexcept { return mass_; }
  double radius() const noexcept { return radius_; }  // support radius (gridded: bounding radius)
  const std::vector<double>& center() const noexcept { return center_; }

  double value(std::span<const double> x) const;
  double sup_norm() const;
  bool in_support(std::span<const double> x, double tol = 0.0) const;

  // h^mu(x) = int g(x - y) dmu(y). Closed forms for analytic densities;
  // exact cell integrals for gridded ones.
  double potential(const RieszKernel& k, std::span<const double> x) const;
  // Double integral  int int g(x - y) dmu dmu.
  double self_energy(const RieszKernel& k) const;

  // Quadrature of order n (nodes per direction).
  WeightedNodes quadrature(int order) const;
  // int |x|^p dmu about the origin.
  double radial_moment(int p) const;
  // mu(B(c, R)).
  double ball_mass(std::span<const double> c, double R) const;
  // int mu log mu dx.
  double entropy() const;

  // Density of x -> t x with total mass new_mass.
  Density dilated(double t, double new_mass) const;

  void sample(Rng& rng, std::span<double> out) const;
  std::vector<double> sample_points(Rng& rng, std::size_t n) const;

  const GridSpec& grid() const;
  const std::vector<double>& values() const;

  // Gridded CSV: "# riesz-density", "d,<d>", "lower,...", "spacing,<h>",
  // "shape,...", then one value per line in row-major order.
  void write_csv(std::ostream& os) const;
  static Density read_csv(std::istream& is);

 private:
  DensityKind kind_ = DensityKind::UniformBall;
  int d_ = 1;
  double mass_ = 1.0;
  double radius_ = 1.0;
  std::vector<double> center_;
  std::shared_ptr<const GridSpec> grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<double>> cdf_;
};

}  // namespace riesz
