#include "riesz/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <utility>

#include "riesz/errors.hpp"

namespace riesz {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  // Returns (P_n(x), P_n'(x)).
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

Rule1D composite_gauss(int panels, int order, double a, double b) {
  Rule1D out;
  const double step = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const Rule1D r = gauss_legendre(order, a + p * step, a + (p + 1) * step);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), tol, &err);
  if (!(err <= std::max(1e3 * tol, 1e-14) * std::max(1.0, std::abs(val)))) {
    throw ToleranceError("integrate_adaptive: error estimate " + std::to_string(err) +
                         " above tolerance");
  }
  return val;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double tol) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double x = a + t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    return f(x) * jac;
  };
  return integrate_adaptive(mapped, 0.0, 1.0, tol);
}

}  // namespace riesz
