#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "riesz/errors.hpp"
#include "riesz/kernels.hpp"
#include "riesz/quadrature.hpp"

using namespace riesz;
using std::numbers::pi;

TEST_CASE("kernel range is validated") {
  CHECK_NOTHROW(RieszKernel::make(2, 0.0));
  CHECK_NOTHROW(RieszKernel::make(1, -1.0));
  CHECK_NOTHROW(RieszKernel::make(3, 2.5));
  CHECK_THROWS_AS(RieszKernel::make(2, 2.0), DomainError);
  CHECK_THROWS_AS(RieszKernel::make(3, 0.5), DomainError);
  CHECK_THROWS_AS(RieszKernel::make(1, -1.5), DomainError);
  CHECK_THROWS_AS(RieszKernel::make(0, 0.0), DomainError);
}

TEST_CASE("eval_g values") {
  const double one[2] = {1.0, 0.0};
  CHECK(eval_g(RieszKernel::make(2, 0.0), one) == doctest::Approx(0.0));
  const double two[3] = {0.0, 2.0, 0.0};
  CHECK(eval_g(RieszKernel::make(3, 1.0), two) == doctest::Approx(0.5));
  const double three[1] = {-3.0};
  CHECK(eval_g(RieszKernel::make(1, -1.0), three) == doctest::Approx(-3.0));
}

TEST_CASE("singular evaluation") {
  const double zero[2] = {0.0, 0.0};
  const auto k = RieszKernel::make(2, 0.0);
  CHECK(std::isinf(eval_g(k, zero)));
  CHECK(eval_g(k, zero) > 0.0);
  CHECK_THROWS_AS(eval_g_checked(k, zero), SingularError);
  const double z1[1] = {0.0};
  CHECK(eval_g_checked(RieszKernel::make(1, -1.0), z1) == 0.0);
}

TEST_CASE("coulomb and riesz constants") {
  CHECK(coulomb_constant(2) == doctest::Approx(2.0 * pi));
  CHECK(coulomb_constant(3) == doctest::Approx(4.0 * pi));
  CHECK(coulomb_constant(4) == doctest::Approx(2.0 * pi * pi));
  CHECK_THROWS_AS(coulomb_constant(1), DomainError);
  CHECK(oracle::sphere_area_mc(4, 2000000, 7) == doctest::Approx(2.0 * pi * pi).epsilon(0.01));

  CHECK(riesz_constant(1, 0.0) == doctest::Approx(2.0 * pi));
  CHECK(riesz_constant(2, 0.0) == doctest::Approx(2.0 * pi));
  CHECK(riesz_constant(3, 1.5) == doctest::Approx(std::pow(2.0, 1.5) * std::pow(pi, 1.5)).epsilon(1e-12));
  CHECK(oracle::fractional_constant_3d(1.5) == doctest::Approx(riesz_constant(3, 1.5)).epsilon(1e-8));
  CHECK(oracle::fractional_constant_3d(1.25) == doctest::Approx(riesz_constant(3, 1.25)).epsilon(1e-8));
  CHECK_THROWS_AS(riesz_constant(2, 2.0), DomainError);
}

TEST_CASE("truncation examples") {
  const auto k0 = RieszKernel::make(2, 0.0);
  CHECK(eval_f_eta(k0, std::exp(-1.0), 1.0) == doctest::Approx(1.0));
  CHECK(eval_f_eta(k0, 1.5, 1.0) == 0.0);
  const auto k1 = RieszKernel::make(3, 1.0);
  CHECK(eval_f_eta(k1, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(eval_f_eta(k1, 2.5, 2.0) == 0.0);
  CHECK(std::isinf(eval_f_eta(k0, 0.0, 1.0)));
  CHECK(eval_f_eta(RieszKernel::make(1, -1.0), 0.3, 0.0) == 0.0);
}

TEST_CASE("g_eta + f_eta = g") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(1e-3, 5.0);
  const RieszKernel ks[] = {RieszKernel::make(1, 0.0), RieszKernel::make(2, 0.0), RieszKernel::make(3, 1.0),
                            RieszKernel::make(3, 2.2), RieszKernel::make(1, -0.5), RieszKernel::make(2, 1.3)};
  for (const auto& k : ks) {
    for (int i = 0; i < 200; ++i) {
      const double r = u(gen), eta = u(gen);
      const double sum = eval_g_eta(k, r, eta) + eval_f_eta(k, r, eta);
      CHECK(sum == doctest::Approx(eval_g(k, r)).epsilon(1e-15));
    }
  }
}

TEST_CASE("Newton property of the smeared charge") {
  for (int d : {2, 3}) {
    const auto k = RieszKernel::make(d, d - 2.0);
    const double eta = 0.7;
    SmearedCharge q{std::vector<double>(d, 0.0), eta};
    q.center[0] = 0.1;
    for (double r : {0.2, 0.5, 1.1, 2.0}) {
      std::vector<double> x(d, 0.0);
      x[0] = 0.1 + r * 0.6;
      x[1] = r * 0.8;
      const double expect = eval_g_eta(k, r, eta);
      CHECK(std::abs(smeared_potential(k, q, x) - expect) < 1e-8);
    }
  }
}

TEST_CASE("int |f_eta| scales like eta^{d-s}") {
  const RieszKernel ks[] = {RieszKernel::make(2, 0.0), RieszKernel::make(3, 1.0), RieszKernel::make(2, 1.0),
                            RieszKernel::make(1, 0.5)};
  for (const auto& k : ks) {
    std::vector<double> C;
    for (double eta : {0.1, 1.0, 10.0}) {
      // r = eta u^2 removes the singularity at the origin.
      auto f = [&](double u) {
        const double r = eta * u * u;
        return u == 0.0 ? 0.0 : eval_f_eta(k, r, eta) * std::pow(r, k.d - 1) * 2.0 * eta * u;
      };
      const double I = (k.d == 1 ? 2.0 : sphere_area(k.d)) * integrate_adaptive(f, 0.0, 1.0, 1e-12 * (1 + eta * eta));
      C.push_back(I / std::pow(eta, k.d - k.s));
    }
    CHECK(C[0] == doctest::Approx(C[1]).epsilon(1e-8));
    CHECK(C[2] == doctest::Approx(C[1]).epsilon(1e-8));
  }
}

TEST_CASE("g is radially decreasing") {
  const RieszKernel ks[] = {RieszKernel::make(1, -1.0), RieszKernel::make(1, 0.0), RieszKernel::make(2, 0.0),
                            RieszKernel::make(2, 1.5), RieszKernel::make(3, 1.0), RieszKernel::make(3, 2.9)};
  for (const auto& k : ks) {
    double prev = eval_g(k, 1e-3);
    for (int i = 1; i < 500; ++i) {
      const double r = 1e-3 + 0.01 * i;
      const double g = eval_g(k, r);
      CHECK(g < prev);
      prev = g;
      CHECK(g_prime(k, r) < 0.0);
    }
  }
}

TEST_CASE("derivatives match finite differences") {
  const RieszKernel ks[] = {RieszKernel::make(1, -1.0), RieszKernel::make(2, 0.0), RieszKernel::make(3, 1.0)};
  for (const auto& k : ks) {
    for (double r : {0.3, 1.0, 2.5}) {
      const double h = 1e-5;
      const double fd1 = (eval_g(k, r + h) - eval_g(k, r - h)) / (2 * h);
      CHECK(g_prime(k, r) == doctest::Approx(fd1).epsilon(1e-7));
      const double fd2 = (g_prime(k, r + h) - g_prime(k, r - h)) / (2 * h);
      CHECK(g_second(k, r) == doctest::Approx(fd2).epsilon(1e-7));
    }
  }
  const auto k = RieszKernel::make(2, 0.0);
  const double x[2] = {0.3, -0.4};
  double gr[2];
  grad_g(k, x, gr);
  CHECK(gr[0] == doctest::Approx(-0.3 / 0.25));
  CHECK(gr[1] == doctest::Approx(0.4 / 0.25));
  const double w[2] = {1.0, 2.0};
  const double h = 1e-5;
  double xp[2] = {x[0] + h * w[0], x[1] + h * w[1]}, xm[2] = {x[0] - h * w[0], x[1] - h * w[1]};
  const double fd = (eval_g(k, xp) - 2 * eval_g(k, x) + eval_g(k, xm)) / (h * h);
  CHECK(hess_g_contract(k, x, w) == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("Gauss-Legendre rules") {
  const Rule1D r = gauss_legendre(10, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 19);
  CHECK(s == doctest::Approx(std::pow(2.0, 20) / 20.0).epsilon(1e-13));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}
