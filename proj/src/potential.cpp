#include "riesz/potential.hpp"

#include "riesz/errors.hpp"

namespace riesz {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

Potential Potential::radial_poly(double c2, double c4) {
  if (c4 < 0.0 || (c4 == 0.0 && c2 < 0.0)) {
    throw DomainError("radial_poly: potential is not bounded below");
  }
  Potential p;
  p.family_ = "radial_poly";
  p.c2_ = c2;
  p.c4_ = c4;
  return p;
}

Potential Potential::custom(std::string name, Fn value, GradFn gradient, Fn laplacian) {
  if (!value || !gradient) throw DomainError("custom potential needs value and gradient");
  Potential p;
  p.family_ = std::move(name);
  p.value_ = std::move(value);
  p.gradient_ = std::move(gradient);
  p.laplacian_ = std::move(laplacian);
  return p;
}

double Potential::value(std::span<const double> x) const {
  if (value_) return value_(x);
  const double r2 = norm2(x);
  return c2_ * r2 + c4_ * r2 * r2;
}

void Potential::gradient(std::span<const double> x, std::span<double> out) const {
  if (gradient_) {
    gradient_(x, out);
    return;
  }
  const double f = 2.0 * c2_ + 4.0 * c4_ * norm2(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
}

double Potential::laplacian(std::span<const double> x) const {
  if (laplacian_) return laplacian_(x);
  if (!is_radial_poly()) throw DomainError("potential '" + family_ + "' has no Laplacian");
  const double d = static_cast<double>(x.size());
  return 2.0 * d * c2_ + 4.0 * (d + 2.0) * c4_ * norm2(x);
}

bool Potential::confining() const noexcept {
  // The log kernel needs V to beat log|x|; any positive power does.
  return is_radial_poly() && (c4_ > 0.0 || c2_ > 0.0);
}

}  // namespace riesz
