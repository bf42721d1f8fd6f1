#pragma once

#include <functional>
#include <vector>

namespace riesz {

// One-dimensional rule on [a, b].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b] (Newton on the Legendre recurrence).
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre with `panels` equal panels of `order` points.
Rule1D composite_gauss(int panels, int order, double a, double b);

// Adaptive Gauss-Kronrod integration of a smooth 1D integrand; throws
// ToleranceError when the estimated error stays above tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_depth = 30);

// Same on [a, inf) via the map x = a + t / (1 - t).
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double tol = 1e-12);

}  // namespace riesz
