#include "riesz/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

RieszKernel RieszKernel::make(int d, double s) {
  if (d < 1) throw DomainError("RieszKernel: dimension must be >= 1");
  if (!(s >= d - 2.0 && s < d)) {
    throw DomainError("RieszKernel: need d-2 <= s < d, got d=" + std::to_string(d) +
                      " s=" + std::to_string(s));
  }
  return RieszKernel{d, s};
}

double eval_g(const RieszKernel& k, double r) {
  if (r == 0.0) return k.s >= 0.0 ? kInf : 0.0;
  if (k.s == 0.0) return -std::log(r);
  return std::pow(r, -k.s) / k.s;
}

double eval_g(const RieszKernel& k, std::span<const double> x) { return eval_g(k, norm(x)); }

double eval_g_checked(const RieszKernel& k, std::span<const double> x) {
  const double r = norm(x);
  if (r == 0.0 && k.singular_at_origin()) throw SingularError("eval_g: singular evaluation at x = 0");
  return eval_g(k, r);
}

double g_prime(const RieszKernel& k, double r) {
  if (k.s == 0.0) return -1.0 / r;
  return -std::pow(r, -k.s - 1.0);
}

double g_second(const RieszKernel& k, double r) {
  if (k.s == 0.0) return 1.0 / (r * r);
  return (k.s + 1.0) * std::pow(r, -k.s - 2.0);
}

void grad_g(const RieszKernel& k, std::span<const double> x, std::span<double> out) {
  const double r = norm(x);
  // grad g = g'(r) x / r ; for s = 0 this is -x / r^2.
  const double f = (k.s == 0.0) ? -1.0 / (r * r) : -std::pow(r, -k.s - 2.0);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
}

double hess_g_contract(const RieszKernel& k, std::span<const double> x,
                       std::span<const double> w) {
  if (x.size() == 1) return g_second(k, std::abs(x[0])) * w[0] * w[0];
  // D^2 g = (g'/r) I + (g'' - g'/r) xx^T / r^2.
  double r2 = 0.0, xw = 0.0, ww = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r2 += x[i] * x[i];
    xw += x[i] * w[i];
    ww += w[i] * w[i];
  }
  const double r = std::sqrt(r2);
  const double gp_over_r = g_prime(k, r) / r;
  const double gpp = g_second(k, r);
  return gp_over_r * ww + (gpp - gp_over_r) * xw * xw / r2;
}

double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double coulomb_constant(int d) {
  if (d < 2) throw DomainError("coulomb_constant: d >= 2 required (use riesz_constant for d = 1)");
  if (d == 2) return 2.0 * std::numbers::pi;
  return sphere_area(d);
}

double riesz_constant(int d, double s) {
  if (d < 1 || !(s >= d - 2.0 && s < d)) {
    throw DomainError("riesz_constant: (d, s) outside d-2 <= s < d");
  }
  if (s == 0.0 && (d == 1 || d == 2)) return 2.0 * std::numbers::pi;
  if (s == d - 2.0) return sphere_area(d);  // includes d = 1, s = -1: |S^0| = 2
  if (s < 0.0) throw DomainError("riesz_constant: no normalization for d = 1, -1 < s < 0");
  return std::pow(2.0, d - s) * std::pow(std::numbers::pi, 0.5 * d) *
         std::tgamma(0.5 * (d - s)) / std::tgamma(0.5 * s);
}

double eval_f_eta(const RieszKernel& k, double r, double eta) {
  if (k.s < 0.0 && eta == 0.0) return 0.0;
  if (r >= eta) return 0.0;
  if (r == 0.0) return k.s >= 0.0 ? kInf : -eval_g(k, eta);
  if (k.s == 0.0) return -std::log(r / eta);
  return (std::pow(r, -k.s) - std::pow(eta, -k.s)) / k.s;
}

double eval_g_eta(const RieszKernel& k, double r, double eta) {
  if (k.s < 0.0 && eta == 0.0) return eval_g(k, r);
  if (r >= eta) return eval_g(k, r);
  return eval_g(k, eta);
}

double smeared_potential(const RieszKernel& k, const SmearedCharge& charge,
                         std::span<const double> x, int nodes) {
  const int d = k.d;
  if (static_cast<int>(x.size()) != d || static_cast<int>(charge.center.size()) != d) {
    throw DomainError("smeared_potential: dimension mismatch");
  }
  const double eta = charge.radius;
  if (d == 2) {
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / nodes;
      const double y0 = charge.center[0] + eta * std::cos(phi);
      const double y1 = charge.center[1] + eta * std::sin(phi);
      acc += eval_g(k, std::hypot(x[0] - y0, x[1] - y1));
    }
    return acc / nodes;
  }
  if (d == 3) {
    const Rule1D polar = gauss_legendre(nodes, -1.0, 1.0);
    const int naz = 2 * nodes;
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double ct = polar.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      double ring = 0.0;
      for (int j = 0; j < naz; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / naz;
        const double y[3] = {charge.center[0] + eta * st * std::cos(phi),
                             charge.center[1] + eta * st * std::sin(phi),
                             charge.center[2] + eta * ct};
        const double dx = x[0] - y[0], dy = x[1] - y[1], dz = x[2] - y[2];
        ring += eval_g(k, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
      acc += polar.weights[i] * ring / naz;
    }
    return 0.5 * acc;  // polar weights sum to 2
  }
  throw DomainError("smeared_potential: only d = 2 or 3");
}

}  // namespace riesz
