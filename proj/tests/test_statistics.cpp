#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "riesz/errors.hpp"
#include "riesz/rng.hpp"
#include "riesz/statistics.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

double bump_u(double u) { return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; }
double bump_du(double u) { return u < 1.0 ? bump_u(u) * (-2.0 * u / ((1.0 - u * u) * (1.0 - u * u))) : 0.0; }

double variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("bump test function") {
  const TestFunction xi = TestFunction::bump({0.1, -0.2}, 0.7, 2.0);
  const double c[2] = {0.1, -0.2};
  CHECK(xi.value(c) == doctest::Approx(2.0));
  const double out[2] = {0.9, 0.0};
  CHECK(xi.value(out) == 0.0);
  const double x[2] = {0.3, 0.1};
  double g[2];
  xi.gradient(x, g);
  const double h = 1e-6;
  for (int a = 0; a < 2; ++a) {
    double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
    xp[a] += h;
    xm[a] -= h;
    CHECK(std::abs(g[a] - (xi.value(xp) - xi.value(xm)) / (2 * h)) < 1e-6);
  }
  CHECK(xi.support_radius() == doctest::Approx(0.7));
  CHECK_THROWS_AS(TestFunction::bump({0.0}, -1.0), DomainError);
}

TEST_CASE("Dirichlet energy of the bump") {
  // radial oracle: int_0^1 |xi0'|^2 |S^{d-1}| u^{d-1} du / l^{2-d}
  for (int d : {1, 2, 3}) {
    const double area = d == 1 ? 2.0 : (d == 2 ? 2.0 * pi : 4.0 * pi);
    const double I0 = area * oracle::gk([d](double u) { return bump_du(u) * bump_du(u) * std::pow(u, d - 1); }, 0.0, 1.0);
    for (double l : {0.35, 0.7}) {
      const TestFunction xi = TestFunction::bump(std::vector<double>(d, 0.0), l);
      double err = 0.0;
      const double E = xi.dirichlet_energy(&err);
      CHECK(E == doctest::Approx(I0 * std::pow(l, d - 2)).epsilon(1e-9));
      CHECK(err < 1e-8 * E);
    }
  }
  const TestFunction xi = TestFunction::bump({0.0, 0.0}, 0.7);
  CHECK(xi.rescaled(0.5).dirichlet_energy() == doctest::Approx(xi.dirichlet_energy()).epsilon(1e-10));
  CHECK(xi.rescaled(0.5).scale() == doctest::Approx(0.35));
  CHECK(predicted_fluct_variance(2, 2.0, 500, xi) == doctest::Approx(xi.dirichlet_energy() / (4.0 * pi)));
  CHECK(predicted_fluct_variance(2, 2.0, 500, xi.rescaled(0.5)) ==
        doctest::Approx(predicted_fluct_variance(2, 2.0, 500, xi)).epsilon(1e-10));
  const TestFunction x1 = TestFunction::bump({0.0}, 1.0);
  CHECK(predicted_fluct_variance(1, 2.0, 100, x1) == doctest::Approx(x1.dirichlet_energy() / (4.0 * 100)));
  CHECK_THROWS_AS(predicted_fluct_variance(3, 2.0, 100, TestFunction::bump({0.0, 0.0, 0.0}, 1.0)), DomainError);
}

TEST_CASE("moments against the disk") {
  const Density disk = Density::uniform_ball(2, 1.0);
  const double l = 0.7;
  const TestFunction xi = TestFunction::bump({0.0, 0.0}, l);
  // int xi dmu = (1/pi) 2 pi int_0^l r xi0(r / l) dr
  const double m1 = 2.0 * oracle::gk([l](double r) { return r * bump_u(r / l); }, 0.0, l);
  const double m2 = 2.0 * oracle::gk([l](double r) { return r * std::pow(bump_u(r / l), 2); }, 0.0, l);
  CHECK(xi.moment(disk, 1) == doctest::Approx(m1).epsilon(1e-10));
  CHECK(xi.moment(disk, 2) == doctest::Approx(m2).epsilon(1e-10));
  CHECK(m1 == doctest::Approx(0.19779).epsilon(1e-4));
  const TestFunction off = TestFunction::bump({0.2, 0.1}, 0.5);
  // translated copy fully inside the disk has the same moment
  CHECK(off.moment(disk, 1) == doctest::Approx(TestFunction::bump({0.0, 0.0}, 0.5).moment(disk, 1)).epsilon(1e-8));
}

TEST_CASE("fluct examples") {
  const Density disk = Density::uniform_ball(2, 1.0);
  Rng rng(1);
  const Configuration X(2, disk.sample_points(rng, 300));
  const TestFunction one = TestFunction::custom(
      "one", 2, [](std::span<const double>) { return 1.0; },
      [](std::span<const double>, std::span<double> g) { g[0] = g[1] = 0.0; }, {0.0, 0.0}, 10.0);
  CHECK(std::abs(fluct(X, disk, one)) < 1e-9);
  const TestFunction a = TestFunction::bump({0.1, 0.0}, 0.6, 1.0), b = TestFunction::bump({0.1, 0.0}, 0.6, 3.0);
  CHECK(fluct(X, disk, b) == doctest::Approx(3.0 * fluct(X, disk, a)).epsilon(1e-12));

  const std::size_t N = 200, M = 2000;
  const SampleEnsemble ens = iid_ensemble(disk, N, M, 9);
  const TestFunction xi = TestFunction::bump({0.0, 0.0}, 0.6);
  const CltReport r = clt_harness(ens, disk, xi, 2.0, false);
  CHECK(std::abs(r.variance - r.iid_variance) < 4.0 * r.variance_stderr);
  CHECK(std::isnan(r.predicted_variance));
  CHECK(std::abs(r.mean) < 4.0 * std::sqrt(r.variance / M));
  CHECK(r.normality.ad_pvalue > 0.01);
}

TEST_CASE("CLT harness on Ginibre against the exact finite-N variance") {
  const Density disk = Density::uniform_ball(2, 1.0);
  const double l = 0.7;
  const TestFunction xi = TestFunction::bump({0.0, 0.0}, l);
  const std::size_t N = 200, M = 200;
  const SampleEnsemble ens = ginibre_ensemble(N, M, 1000);
  const CltReport r = clt_harness(ens, disk, xi, 2.0);
  const double exact = oracle::kostlan_variance(N, [l](double t) { return bump_u(std::sqrt(t) / l); }, l * l);
  CHECK(std::abs(r.variance - exact) < 4.0 * r.variance_stderr);
  CHECK(r.predicted_variance == doctest::Approx(xi.dirichlet_energy() / (4.0 * pi)));
  CHECK(r.normality.ad_pvalue > 0.01);
  CHECK(r.warnings.empty() == r.matches_prediction);

  // the iid control never matches the limit law
  const CltReport c = clt_harness(iid_ensemble(disk, N, M, 5), disk, xi, 2.0);
  CHECK_FALSE(c.matches_prediction);
  CHECK(c.ratio > 2.0);

  std::stringstream ss;
  r.write_json(ss);
  const auto j = nlohmann::json::parse(ss.str());
  for (const char* key : {"M", "N", "variance", "predicted_variance", "ratio", "ad_pvalue", "ks_pvalue",
                          "bulk_distance", "matches_prediction", "warnings"})
    CHECK(j.contains(key));
}

TEST_CASE("CLT harness preconditions") {
  const Density disk = Density::uniform_ball(2, 1.0);
  const SampleEnsemble ens = iid_ensemble(disk, 20, 30, 2);
  CHECK_THROWS_AS(clt_harness(ens, disk, TestFunction::bump({0.75, 0.0}, 0.3), 2.0), DomainError);
  const CltReport r = clt_harness(ens, disk, TestFunction::bump({0.0, 0.0}, 0.5), 2.0, false);
  CHECK(r.warnings.size() == 1);
  CHECK(bulk_distance(disk, TestFunction::bump({0.2, 0.0}, 0.5)) == doctest::Approx(0.3));
  SampleEnsemble mixed = ens;
  CHECK_THROWS_AS(mixed.add(Configuration(2, {0.0, 0.0}), 1), DomainError);
}

TEST_CASE("normality test") {
  Rng rng(3);
  std::vector<double> z(400), e(400);
  for (double& v : z) v = rng.normal();
  for (double& v : e) v = -std::log(rng.uniform());
  const NormalityTest nz = normality_test(z), ne = normality_test(e);
  CHECK(nz.ad_pvalue > 0.01);
  CHECK(nz.ks_pvalue > 0.01);
  CHECK(ne.ad_pvalue < 0.01);
  CHECK(ne.ks_pvalue < 0.01);
  // false rejection rate at the 1% level
  int reject = 0;
  for (int rep = 0; rep < 500; ++rep) {
    for (double& v : z) v = rng.normal();
    reject += normality_test(z).ad_pvalue < 0.01;
  }
  CHECK(reject < 15);
}

TEST_CASE("discrepancy") {
  const Density disk = Density::uniform_ball(2, 1.0);
  const double h = 0.02;
  std::vector<double> pts;
  for (double x = -1.0 + h / 2; x < 1.0; x += h)
    for (double y = -1.0 + h / 2; y < 1.0; y += h)
      if (x * x + y * y < 1.0) pts.insert(pts.end(), {x, y});
  const Configuration X(2, pts);
  const double c[2] = {0.0, 0.0};
  const double R = 0.5;
  std::size_t boundary = 0;
  for (std::size_t i = 0; i < X.size(); ++i)
    boundary += std::abs(std::hypot(X.point(i)[0], X.point(i)[1]) - R) < h / std::sqrt(2.0);
  CHECK(std::abs(discrepancy(X, disk, c, R)) <= static_cast<double>(boundary));

  // additivity: ball = inner ball + annulus
  Rng rng(4);
  const Configuration Y(2, disk.sample_points(rng, 500));
  std::size_t annulus = 0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    const double r = std::hypot(Y.point(i)[0], Y.point(i)[1]);
    annulus += r >= 0.3 && r < 0.6;
  }
  const double D_ann = annulus - 500.0 * (0.36 - 0.09);
  CHECK(discrepancy(Y, disk, c, 0.6) == doctest::Approx(discrepancy(Y, disk, c, 0.3) + D_ann).epsilon(1e-12));

  const SampleEnsemble P = poisson_ensemble(disk, 400.0, 3000, 6);
  std::vector<double> D;
  for (const auto& Z : P.samples) D.push_back(discrepancy(Z, 400.0 * 0.25, c, R));
  const double lam = 100.0;
  CHECK(std::abs(variance(D) - lam) < 4.0 * std::sqrt((lam + 2 * lam * lam) / 3000));
}

TEST_CASE("number variance of a Poisson process") {
  const Density disk = Density::uniform_ball(2, 1.0);
  const SampleEnsemble P = poisson_ensemble(disk, 1000.0, 1000, 8);
  std::vector<double> radii;
  for (double R = 0.05; R <= 0.6; R += 0.025) radii.push_back(R);
  const double c[2] = {0.0, 0.0};
  const NumberVarianceCurve nv = number_variance_curve(P, disk, radii, c);
  CHECK(nv.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(nv.fit_points >= 3);
  std::stringstream ss;
  nv.write_csv(ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "R,mean_count,variance");
}

TEST_CASE("local field") {
  // N = 400 points of the lattice (Z / 20)^2 shifted so 0 is a lattice point
  std::vector<double> pts;
  for (int i = -10; i < 10; ++i)
    for (int j = -10; j < 10; ++j) pts.insert(pts.end(), {i / 20.0, j / 20.0});
  const Configuration X(2, pts);
  const double c[2] = {0.0, 0.0};
  const Configuration L = local_field(X, c, 5.0);
  CHECK(L.size() == 25);
  for (double v : L.points) CHECK(std::abs(v - std::round(v)) < 1e-12);
  const double far[2] = {5.0, 5.0};
  CHECK(local_field(X, far, 3.0).size() == 0);

  const SampleEnsemble G = ginibre_ensemble(200, 60, 77);
  std::vector<double> counts;
  for (const auto& Z : G.samples) counts.push_back(static_cast<double>(local_field(Z, c, 3.0).size()));
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  CHECK(std::abs(mean - 9.0 / pi) < 4.0 * std::sqrt(variance(counts) / counts.size()) + 0.05);

  // pair counts within unit distance do not depend on the centre
  auto pairs = [&](const double* ctr) {
    std::vector<double> v;
    for (const auto& Z : G.samples) {
      const Configuration W = local_field(Z, std::span<const double>(ctr, 2), 4.0);
      double n = 0;
      for (std::size_t i = 0; i < W.size(); ++i)
        for (std::size_t j = i + 1; j < W.size(); ++j)
          n += std::hypot(W.point(i)[0] - W.point(j)[0], W.point(i)[1] - W.point(j)[1]) < 1.0;
      v.push_back(n);
    }
    return v;
  };
  const double c2[2] = {0.3, -0.2};
  const auto p0 = pairs(c), p1 = pairs(c2);
  const double m0 = std::accumulate(p0.begin(), p0.end(), 0.0) / p0.size();
  const double m1 = std::accumulate(p1.begin(), p1.end(), 0.0) / p1.size();
  CHECK(std::abs(m0 - m1) < 4.0 * std::sqrt((variance(p0) + variance(p1)) / p0.size()));
}

TEST_CASE("parallel ensembles are scheduling independent") {
  const SampleEnsemble a = ginibre_ensemble(30, 8, 5, 1), b = ginibre_ensemble(30, 8, 5, 3);
  CHECK(a.seeds == b.seeds);
  for (std::size_t m = 0; m < 8; ++m) CHECK(a.samples[m].points == b.samples[m].points);
  const SampleEnsemble h1 = hermite_ensemble(30, 2.0, 5, 5, 1), h2 = hermite_ensemble(30, 2.0, 5, 5, 2);
  for (std::size_t m = 0; m < 5; ++m) CHECK(h1.samples[m].points == h2.samples[m].points);
  std::vector<int> seen(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { seen[i] += 1; });
  CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
}
