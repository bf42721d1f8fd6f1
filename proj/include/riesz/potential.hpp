#pragma once

#include <functional>
#include <span>
#include <string>

namespace riesz {

// Confinement V. The registered family is radial_poly,
//   V(x) = c2 |x|^2 + c4 |x|^4,
// which covers every quadratic and quartic case used here. A custom
// potential carries its own callables and is never treated as registered.
class Potential {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

  static Potential radial_poly(double c2, double c4 = 0.0);
  static Potential quadratic(double c2) { return radial_poly(c2, 0.0); }
  static Potential zero() { return radial_poly(0.0, 0.0); }
  static Potential custom(std::string name, Fn value, GradFn gradient, Fn laplacian);

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  double laplacian(std::span<const double> x) const;

  bool is_radial_poly() const noexcept { return family_ == "radial_poly"; }
  bool is_pure_quadratic() const noexcept { return is_radial_poly() && c4_ == 0.0 && c2_ > 0.0; }
  const std::string& family() const noexcept { return family_; }
  double c2() const noexcept { return c2_; }
  double c4() const noexcept { return c4_; }

  // Radial profile helpers for radial_poly (r = |x|).
  double radial_value(double r) const { return c2_ * r * r + c4_ * r * r * r * r; }
  double radial_derivative(double r) const { return 2.0 * c2_ * r + 4.0 * c4_ * r * r * r; }
  double radial_laplacian(double r, int d) const {
    return 2.0 * d * c2_ + 4.0 * (d + 2.0) * c4_ * r * r;
  }

  // Growth tag: for radial_poly, V + g -> +inf at infinity.
  bool confining() const noexcept;

 private:
  std::string family_;
  double c2_ = 0.0;
  double c4_ = 0.0;
  Fn value_;
  GradFn gradient_;
  Fn laplacian_;
};

}  // namespace riesz
