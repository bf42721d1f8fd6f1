#include "riesz/density.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "riesz/errors.hpp"
#include "riesz/grid_convolution.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {
namespace {

constexpr double kPi = std::numbers::pi;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(std::span<const double> x, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - (c.empty() ? 0.0 : c[i]);
    s += t * t;
  }
  return std::sqrt(s);
}

// int_0^u g on the line.
double phi1(const RieszKernel& k, double u) {
  if (u == 0.0) return 0.0;
  const double a = std::abs(u);
  if (k.s == 0.0) return -(u * std::log(a) - u);
  return std::copysign(std::pow(a, 1.0 - k.s), u) / (k.s * (1.0 - k.s));
}

// int_0^u phi1.
double psi1(const RieszKernel& k, double u) {
  if (u == 0.0) return 0.0;
  const double a = std::abs(u);
  if (k.s == 0.0) return -0.5 * u * u * std::log(a) + 0.75 * u * u;
  return std::pow(a, 2.0 - k.s) / (k.s * (1.0 - k.s) * (2.0 - k.s));
}

// Antiderivative of log(x^2 + y^2) in both variables.
double log_corner(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  return x * y * std::log(x * x + y * y) - 3.0 * x * y + x * x * std::atan(y / x) +
         y * y * std::atan(x / y);
}

const Rule1D& far_rule() {
  static const Rule1D rule = gauss_legendre(6, -0.5, 0.5);
  return rule;
}

// semicircle pieces, radius 2
double semicircle_log_potential2(double x) {
  const double a = std::abs(x);
  if (a <= 2.0) return x * x / 4.0 - 0.5;
  const double q = std::sqrt(x * x - 4.0);
  return x * x / 4.0 - a * q / 4.0 + std::log((a + q) / 2.0) - 0.5;
}

double semicircle_cdf2(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double u = x / 2.0;
  return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / kPi;
}

double catalan(int n) {
  double c = 1.0;
  for (int k = 0; k < n; ++k) c = c * 2.0 * (2.0 * k + 1.0) / (k + 2.0);
  return c;
}

double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double disk_overlap_area(double r1, double r2, double dd) {
  if (dd >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (dd <= std::abs(r1 - r2)) return kPi * rmin * rmin;
  const double a1 = r1 * r1 * std::acos((dd * dd + r1 * r1 - r2 * r2) / (2.0 * dd * r1));
  const double a2 = r2 * r2 * std::acos((dd * dd + r2 * r2 - r1 * r1) / (2.0 * dd * r2));
  const double tri = 0.5 * std::sqrt((-dd + r1 + r2) * (dd + r1 - r2) * (dd - r1 + r2) * (dd + r1 + r2));
  return a1 + a2 - tri;
}

double ball_overlap_volume3(double R, double r, double dd) {
  if (dd >= R + r) return 0.0;
  const double rmin = std::min(R, r);
  if (dd <= std::abs(R - r)) return 4.0 / 3.0 * kPi * rmin * rmin * rmin;
  const double t = R + r - dd;
  return kPi * t * t * (dd * dd + 2.0 * dd * r - 3.0 * r * r + 2.0 * dd * R + 6.0 * r * R - 3.0 * R * R) /
         (12.0 * dd);
}

double unit_ball_volume(int d) { return sphere_area(d) / d; }

}  // namespace

// ---------------------------------------------------------------- GridSpec

GridSpec GridSpec::square(int d, double half_width, int n) {
  if (n < 2 || half_width <= 0.0) throw DomainError("GridSpec::square: need n >= 2, half_width > 0");
  GridSpec g;
  g.d = d;
  g.spacing = 2.0 * half_width / (n - 1);
  g.lower.assign(d, -half_width);
  g.shape.assign(d, n);
  return g;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int v : shape) n *= static_cast<std::size_t>(v);
  return n;
}

double GridSpec::cell_volume() const { return std::pow(spacing, d); }

void GridSpec::node(std::size_t index, std::span<double> out) const {
  for (int a = d - 1; a >= 0; --a) {
    const std::size_t i = index % shape[a];
    index /= shape[a];
    out[a] = lower[a] + static_cast<double>(i) * spacing;
  }
}

std::vector<double> GridSpec::node(std::size_t index) const {
  std::vector<double> x(d);
  node(index, x);
  return x;
}

double cell_integral(const RieszKernel& k, std::span<const double> offset, double h) {
  const int d = static_cast<int>(offset.size());
  const double r = norm(offset);
  const Rule1D& fr = far_rule();
  if (d == 1) {
    if (std::abs(offset[0]) >= 4.0 * h) {
      double s = 0.0;
      for (std::size_t i = 0; i < fr.nodes.size(); ++i) s += fr.weights[i] * eval_g(k, std::abs(offset[0] + h * fr.nodes[i]));
      return s * h;
    }
    return phi1(k, offset[0] + 0.5 * h) - phi1(k, offset[0] - 0.5 * h);
  }
  if (d == 2 && k.s == 0.0) {
    if (r >= 4.0 * h) {
      double s = 0.0;
      for (std::size_t i = 0; i < fr.nodes.size(); ++i) {
        const double x = offset[0] + h * fr.nodes[i];
        for (std::size_t j = 0; j < fr.nodes.size(); ++j) {
          const double y = offset[1] + h * fr.nodes[j];
          s += fr.weights[i] * fr.weights[j] * (-0.5 * std::log(x * x + y * y));
        }
      }
      return s * h * h;
    }
    const double a0 = offset[0] - 0.5 * h, a1 = offset[0] + 0.5 * h;
    const double b0 = offset[1] - 0.5 * h, b1 = offset[1] + 0.5 * h;
    const double P = log_corner(a1, b1) - log_corner(a0, b1) - log_corner(a1, b0) + log_corner(a0, b0);
    return -0.5 * P;
  }
  throw DomainError("cell_integral: only 1D kernels and the 2D log kernel are supported");
}

// ----------------------------------------------------------------- Density

Density Density::uniform_ball(int d, double radius, double mass, std::vector<double> center) {
  if (d < 1 || radius <= 0.0 || mass <= 0.0) throw DomainError("uniform_ball: bad parameters");
  if (!center.empty() && static_cast<int>(center.size()) != d) {
    throw DomainError("uniform_ball: center dimension mismatch");
  }
  Density m;
  m.kind_ = DensityKind::UniformBall;
  m.d_ = d;
  m.radius_ = radius;
  m.mass_ = mass;
  m.center_ = center.empty() ? std::vector<double>(d, 0.0) : std::move(center);
  return m;
}

Density Density::semicircle(double radius, double mass) {
  if (radius <= 0.0 || mass <= 0.0) throw DomainError("semicircle: bad parameters");
  Density m;
  m.kind_ = DensityKind::Semicircle;
  m.d_ = 1;
  m.radius_ = radius;
  m.mass_ = mass;
  m.center_ = {0.0};
  return m;
}

Density Density::gridded(GridSpec grid, std::vector<double> values) {
  if (grid.d < 1 || static_cast<int>(grid.shape.size()) != grid.d ||
      static_cast<int>(grid.lower.size()) != grid.d || grid.spacing <= 0.0) {
    throw DomainError("gridded density: malformed grid");
  }
  if (values.size() != grid.size()) throw DomainError("gridded density: value count mismatch");
  Density m;
  m.kind_ = DensityKind::Gridded;
  m.d_ = grid.d;
  m.center_.assign(grid.d, 0.0);
  const double vol = grid.cell_volume();
  std::vector<double> cdf(values.size());
  double acc = 0.0, rmax = 0.0;
  std::vector<double> x(grid.d);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw DomainError("gridded density: values must be finite and nonnegative");
    }
    acc += values[i] * vol;
    cdf[i] = acc;
    if (values[i] > 0.0) {
      grid.node(i, x);
      rmax = std::max(rmax, norm(x));
    }
  }
  if (acc <= 0.0) throw DomainError("gridded density: zero mass");
  m.mass_ = acc;
  m.radius_ = rmax + 0.5 * std::sqrt(static_cast<double>(grid.d)) * grid.spacing;
  m.grid_ = std::make_shared<const GridSpec>(std::move(grid));
  m.values_ = std::make_shared<const std::vector<double>>(std::move(values));
  m.cdf_ = std::make_shared<const std::vector<double>>(std::move(cdf));
  return m;
}

std::string Density::kind_name() const {
  switch (kind_) {
    case DensityKind::UniformBall: return "uniform_ball";
    case DensityKind::Semicircle: return "semicircle";
    case DensityKind::Gridded: return "gridded";
  }
  return "unknown";
}

const GridSpec& Density::grid() const {
  if (!grid_) throw DomainError("density is not gridded");
  return *grid_;
}

const std::vector<double>& Density::values() const {
  if (!values_) throw DomainError("density is not gridded");
  return *values_;
}

double Density::value(std::span<const double> x) const {
  switch (kind_) {
    case DensityKind::UniformBall:
      return dist(x, center_) <= radius_ ? mass_ / (unit_ball_volume(d_) * std::pow(radius_, d_)) : 0.0;
    case DensityKind::Semicircle: {
      const double R = radius_;
      const double t = R * R - x[0] * x[0];
      return t > 0.0 ? mass_ * 2.0 / (kPi * R * R) * std::sqrt(t) : 0.0;
    }
    case DensityKind::Gridded: {
      const GridSpec& g = *grid_;
      std::size_t idx = 0;
      for (int a = 0; a < d_; ++a) {
        const double u = (x[a] - g.lower[a]) / g.spacing + 0.5;
        if (u < 0.0 || u >= g.shape[a]) return 0.0;
        idx = idx * g.shape[a] + static_cast<std::size_t>(u);
      }
      return (*values_)[idx];
    }
  }
  return 0.0;
}

double Density::sup_norm() const {
  switch (kind_) {
    case DensityKind::UniformBall: return mass_ / (unit_ball_volume(d_) * std::pow(radius_, d_));
    case DensityKind::Semicircle: return mass_ * 2.0 / (kPi * radius_);
    case DensityKind::Gridded: return *std::max_element(values_->begin(), values_->end());
  }
  return 0.0;
}

bool Density::in_support(std::span<const double> x, double tol) const {
  if (kind_ == DensityKind::Gridded) return value(x) > 0.0;
  return dist(x, center_) <= radius_ + tol;
}

double Density::potential(const RieszKernel& k, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_ || k.d != d_) throw DomainError("potential: dimension mismatch");
  switch (kind_) {
    case DensityKind::UniformBall: {
      const double R = radius_;
      const double r = dist(x, center_);
      if (d_ == 1) {
        const double u = x[0] - center_[0];
        return mass_ / (2.0 * R) * (phi1(k, u + R) - phi1(k, u - R));
      }
      if (!k.is_coulomb()) {
        throw DomainError("potential: uniform ball closed form needs the Coulomb kernel for d >= 2");
      }
      if (d_ == 2) {
        if (r >= R) return -mass_ * std::log(r);
        return mass_ * ((R * R - r * r) / (2.0 * R * R) - std::log(R));
      }
      const double dm2 = d_ - 2.0;
      if (r >= R) return mass_ * std::pow(r, -dm2) / dm2;
      return mass_ * std::pow(R, -dm2) * (1.0 / dm2 + 0.5 - r * r / (2.0 * R * R));
    }
    case DensityKind::Semicircle: {
      if (!k.is_log()) throw DomainError("potential: semicircle closed form needs the 1D log kernel");
      const double R = radius_;
      return -mass_ * (semicircle_log_potential2(2.0 * x[0] / R) + std::log(R / 2.0));
    }
    case DensityKind::Gridded: {
      const GridSpec& g = *grid_;
      const std::vector<double>& v = *values_;
      std::vector<double> y(d_), off(d_);
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        g.node(i, y);
        for (int a = 0; a < d_; ++a) off[a] = x[a] - y[a];
        acc += v[i] * cell_integral(k, off, g.spacing);
      }
      return acc;
    }
  }
  return 0.0;
}

double Density::self_energy(const RieszKernel& k) const {
  if (k.d != d_) throw DomainError("self_energy: dimension mismatch");
  const double m2 = mass_ * mass_;
  switch (kind_) {
    case DensityKind::UniformBall: {
      const double R = radius_;
      if (d_ == 1) {
        const double c = 1.0 / (2.0 * R);
        return m2 * c * c * (psi1(k, 2.0 * R) + psi1(k, -2.0 * R) - 2.0 * psi1(k, 0.0));
      }
      if (!k.is_coulomb()) {
        throw DomainError("self_energy: uniform ball closed form needs the Coulomb kernel for d >= 2");
      }
      if (d_ == 2) return m2 * (-std::log(R) + 0.25);
      const double dd = d_;
      return m2 * std::pow(R, 2.0 - dd) * (1.0 / (dd - 2.0) + 0.5 - dd / (2.0 * (dd + 2.0)));
    }
    case DensityKind::Semicircle:
      if (!k.is_log()) throw DomainError("self_energy: semicircle closed form needs the 1D log kernel");
      return m2 * (0.25 - std::log(radius_ / 2.0));
    case DensityKind::Gridded: {
      GridConvolver conv(*grid_, k);
      const std::vector<double> u = conv.apply(*values_);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) acc += (*values_)[i] * u[i];
      return acc * grid_->cell_volume();
    }
  }
  return 0.0;
}

WeightedNodes Density::quadrature(int order) const {
  if (order < 1) throw DomainError("quadrature: order must be positive");
  WeightedNodes q;
  q.d = d_;
  switch (kind_) {
    case DensityKind::UniformBall: {
      const double R = radius_;
      const double rho = mass_ / (unit_ball_volume(d_) * std::pow(R, d_));
      if (d_ == 1) {
        const Rule1D r = gauss_legendre(order, center_[0] - R, center_[0] + R);
        q.points = r.nodes;
        for (double w : r.weights) q.weights.push_back(w * rho);
      } else if (d_ == 2) {
        const Rule1D r = gauss_legendre(order, 0.0, R);
        const int na = 2 * order;
        for (int i = 0; i < order; ++i) {
          for (int j = 0; j < na; ++j) {
            const double th = 2.0 * kPi * (j + 0.5) / na;
            q.points.push_back(center_[0] + r.nodes[i] * std::cos(th));
            q.points.push_back(center_[1] + r.nodes[i] * std::sin(th));
            q.weights.push_back(rho * r.weights[i] * r.nodes[i] * 2.0 * kPi / na);
          }
        }
      } else if (d_ == 3) {
        const Rule1D r = gauss_legendre(order, 0.0, R);
        const Rule1D c = gauss_legendre(order, -1.0, 1.0);
        const int na = 2 * order;
        for (int i = 0; i < order; ++i) {
          for (int j = 0; j < order; ++j) {
            const double st = std::sqrt(1.0 - c.nodes[j] * c.nodes[j]);
            for (int l = 0; l < na; ++l) {
              const double ph = 2.0 * kPi * (l + 0.5) / na;
              q.points.push_back(center_[0] + r.nodes[i] * st * std::cos(ph));
              q.points.push_back(center_[1] + r.nodes[i] * st * std::sin(ph));
              q.points.push_back(center_[2] + r.nodes[i] * c.nodes[j]);
              q.weights.push_back(rho * r.weights[i] * r.nodes[i] * r.nodes[i] * c.weights[j] * 2.0 * kPi / na);
            }
          }
        }
      } else {
        throw DomainError("quadrature: uniform ball supported for d <= 3");
      }
      break;
    }
    case DensityKind::Semicircle: {
      // Gauss-Chebyshev of the second kind.
      for (int k = 1; k <= order; ++k) {
        const double t = k * kPi / (order + 1);
        q.points.push_back(radius_ * std::cos(t));
        q.weights.push_back(mass_ * 2.0 / (order + 1) * std::sin(t) * std::sin(t));
      }
      break;
    }
    case DensityKind::Gridded: {
      const double vol = grid_->cell_volume();
      std::vector<double> x(d_);
      for (std::size_t i = 0; i < values_->size(); ++i) {
        if ((*values_)[i] == 0.0) continue;
        grid_->node(i, x);
        q.points.insert(q.points.end(), x.begin(), x.end());
        q.weights.push_back((*values_)[i] * vol);
      }
      break;
    }
  }
  return q;
}

double Density::radial_moment(int p) const {
  if (p < 0) throw DomainError("radial_moment: p must be >= 0");
  const bool centered = std::all_of(center_.begin(), center_.end(), [](double c) { return c == 0.0; });
  if (kind_ == DensityKind::UniformBall && centered) {
    return mass_ * d_ * std::pow(radius_, p) / (d_ + p);
  }
  if (kind_ == DensityKind::Semicircle && p % 2 == 0) {
    return mass_ * std::pow(radius_, p) * catalan(p / 2) / std::pow(2.0, p);
  }
  const WeightedNodes q = quadrature(kind_ == DensityKind::Gridded ? 1 : 128);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += q.weights[i] * std::pow(norm(q.point(i)), p);
  return acc;
}

double Density::ball_mass(std::span<const double> c, double R) const {
  if (static_cast<int>(c.size()) != d_) throw DomainError("ball_mass: dimension mismatch");
  switch (kind_) {
    case DensityKind::UniformBall: {
      const double rho = mass_ / (unit_ball_volume(d_) * std::pow(radius_, d_));
      const double dd = dist(c, center_);
      if (d_ == 1) return rho * interval_overlap(c[0] - R, c[0] + R, center_[0] - radius_, center_[0] + radius_);
      if (d_ == 2) return rho * disk_overlap_area(radius_, R, dd);
      if (d_ == 3) return rho * ball_overlap_volume3(radius_, R, dd);
      if (dd + R <= radius_) return rho * unit_ball_volume(d_) * std::pow(R, d_);
      if (dd + radius_ <= R) return mass_;
      throw DomainError("ball_mass: partial overlap unsupported for d > 3");
    }
    case DensityKind::Semicircle: {
      const double s = 2.0 / radius_;
      return mass_ * (semicircle_cdf2((c[0] + R) * s) - semicircle_cdf2((c[0] - R) * s));
    }
    case DensityKind::Gridded: {
      const GridSpec& g = *grid_;
      const double h = g.spacing;
      std::vector<double> x(d_);
      double acc = 0.0;
      for (std::size_t i = 0; i < values_->size(); ++i) {
        if ((*values_)[i] == 0.0) continue;
        g.node(i, x);
        if (d_ == 1) {
          acc += (*values_)[i] * interval_overlap(x[0] - 0.5 * h, x[0] + 0.5 * h, c[0] - R, c[0] + R);
        } else {
          double r2 = 0.0;
          for (int a = 0; a < d_; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
          if (r2 <= R * R) acc += (*values_)[i] * g.cell_volume();
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double Density::entropy() const {
  switch (kind_) {
    case DensityKind::UniformBall: {
      const double rho = sup_norm();
      return mass_ * std::log(rho);
    }
    case DensityKind::Semicircle: {
      const WeightedNodes q = quadrature(400);
      double acc = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) acc += q.weights[i] * std::log(value(q.point(i)));
      return acc;
    }
    case DensityKind::Gridded: {
      double acc = 0.0;
      for (double v : *values_) {
        if (v > 0.0) acc += v * std::log(v);
      }
      return acc * grid_->cell_volume();
    }
  }
  return 0.0;
}

Density Density::dilated(double t, double new_mass) const {
  if (t <= 0.0 || new_mass <= 0.0) throw DomainError("dilated: need t > 0 and positive mass");
  switch (kind_) {
    case DensityKind::UniformBall: {
      std::vector<double> c = center_;
      for (double& v : c) v *= t;
      return uniform_ball(d_, radius_ * t, new_mass, std::move(c));
    }
    case DensityKind::Semicircle:
      return semicircle(radius_ * t, new_mass);
    case DensityKind::Gridded: {
      GridSpec g = *grid_;
      for (double& v : g.lower) v *= t;
      g.spacing *= t;
      const double f = new_mass / (mass_ * std::pow(t, d_));
      std::vector<double> vals = *values_;
      for (double& v : vals) v *= f;
      return gridded(std::move(g), std::move(vals));
    }
  }
  return *this;
}

void Density::sample(Rng& rng, std::span<double> out) const {
  switch (kind_) {
    case DensityKind::UniformBall: {
      if (d_ == 1) {
        out[0] = center_[0] + radius_ * (2.0 * rng.uniform() - 1.0);
        return;
      }
      double n2 = 0.0;
      for (int a = 0; a < d_; ++a) {
        out[a] = rng.normal();
        n2 += out[a] * out[a];
      }
      const double r = radius_ * std::pow(rng.uniform(), 1.0 / d_) / std::sqrt(n2);
      for (int a = 0; a < d_; ++a) out[a] = center_[a] + r * out[a];
      return;
    }
    case DensityKind::Semicircle: {
      std::gamma_distribution<double> ga(1.5, 1.0);
      const double a = ga(rng), b = ga(rng);
      out[0] = radius_ * (2.0 * a / (a + b) - 1.0);
      return;
    }
    case DensityKind::Gridded: {
      const std::vector<double>& cdf = *cdf_;
      const double u = rng.uniform() * cdf.back();
      std::size_t i = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      i = std::min(i, cdf.size() - 1);
      grid_->node(i, out);
      for (int a = 0; a < d_; ++a) out[a] += grid_->spacing * (rng.uniform() - 0.5);
      return;
    }
  }
}

std::vector<double> Density::sample_points(Rng& rng, std::size_t n) const {
  std::vector<double> pts(n * d_);
  for (std::size_t i = 0; i < n; ++i) sample(rng, std::span<double>(pts.data() + i * d_, d_));
  return pts;
}

void Density::write_csv(std::ostream& os) const {
  const GridSpec& g = grid();
  os.precision(17);
  os << "# riesz-density\n";
  os << "d," << g.d << "\n";
  os << "lower";
  for (double v : g.lower) os << "," << v;
  os << "\nspacing," << g.spacing << "\nshape";
  for (int v : g.shape) os << "," << v;
  os << "\n";
  for (double v : *values_) os << v << "\n";
}

Density Density::read_csv(std::istream& is) {
  std::string line;
  auto fields = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  if (!std::getline(is, line) || line.rfind("# riesz-density", 0) != 0) {
    throw DomainError("density csv: missing header");
  }
  GridSpec g;
  for (const char* key : {"d", "lower", "spacing", "shape"}) {
    if (!std::getline(is, line)) throw DomainError("density csv: truncated header");
    const auto f = fields(line);
    if (f.empty() || f[0] != key) throw DomainError(std::string("density csv: expected ") + key);
    if (f[0] == "d") g.d = std::stoi(f.at(1));
    if (f[0] == "lower") for (std::size_t i = 1; i < f.size(); ++i) g.lower.push_back(std::stod(f[i]));
    if (f[0] == "spacing") g.spacing = std::stod(f.at(1));
    if (f[0] == "shape") for (std::size_t i = 1; i < f.size(); ++i) g.shape.push_back(std::stoi(f[i]));
  }
  std::vector<double> vals;
  vals.reserve(g.size());
  while (std::getline(is, line)) {
    if (!line.empty()) vals.push_back(std::stod(line));
  }
  return gridded(std::move(g), std::move(vals));
}

}  // namespace riesz
