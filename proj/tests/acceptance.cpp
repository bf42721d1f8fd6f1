// Acceptance run: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [id ...]   (no ids runs all twelve)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/jellium.hpp"
#include "riesz/kernels.hpp"
#include "riesz/modenergy.hpp"
#include "riesz/sampler.hpp"
#include "riesz/statistics.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [FAIL]";
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return s / (v.size() - 1);
}

// Standard errors of the mean and variance of iid values.
std::pair<double, double> iid_errors(const std::vector<double>& v) {
  const double m = mean_of(v), var = var_of(v);
  double m4 = 0.0;
  for (double a : v) m4 += std::pow(a - m, 4);
  m4 /= v.size();
  const double n = static_cast<double>(v.size());
  return {std::sqrt(var / n), std::sqrt(std::max(0.0, m4 - var * var) / n)};
}

// Batch means for a correlated series: (mean, err, variance, err). The
// variance is the mean of (x - global mean)^2, so slow modes longer than a
// batch are not dropped.
std::array<double, 4> batch_means(const std::vector<double>& x, int batches = 50) {
  const std::size_t L = x.size() / batches;
  const double m = mean_of(x);
  std::vector<double> bm, bv;
  for (int b = 0; b < batches; ++b) {
    std::vector<double> seg(x.begin() + b * L, x.begin() + (b + 1) * L);
    bm.push_back(mean_of(seg));
    double s = 0.0;
    for (double v : seg) s += (v - m) * (v - m);
    bv.push_back(s / L);
  }
  return {mean_of(bm), std::sqrt(var_of(bm) / batches), mean_of(bv), std::sqrt(var_of(bv) / batches)};
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

Configuration random_in_ball(int d, std::size_t N, double R, Rng& rng) {
  return Configuration(d, Density::uniform_ball(d, R).sample_points(rng, N));
}

struct SweepCase {
  Configuration X;
  EquilibriumResult eq;
  Potential V;
};

// 100 configurations, d alternating 1, 2, N cycling through 8..128, points
// iid uniform on 1.5x the droplet so that the zeta term is exercised.
const std::vector<SweepCase>& sweep() {
  static std::vector<SweepCase> cases = [] {
    std::vector<SweepCase> out;
    const Potential V1 = Potential::quadratic(0.25), V2 = Potential::quadratic(0.5);
    const EquilibriumResult e1 = analytic_equilibrium(V1, RieszKernel::make(1, 0.0));
    const EquilibriumResult e2 = analytic_equilibrium(V2, RieszKernel::make(2, 0.0));
    Rng rng(2024, 1);
    for (int k = 0; k < 100; ++k) {
      const int d = 1 + k % 2;
      const std::size_t N = std::size_t{8} << ((k / 2) % 5);
      const EquilibriumResult& eq = d == 1 ? e1 : e2;
      out.push_back({random_in_ball(d, N, 1.5 * eq.density.radius(), rng), eq, d == 1 ? V1 : V2});
    }
    return out;
  }();
  return cases;
}

const SampleEnsemble& ginibre_500() {
  static const SampleEnsemble ens = ginibre_ensemble(500, 400, 500000);
  return ens;
}

Outcome splitting() {
  Outcome o;
  double worst = 0.0;
  for (const auto& c : sweep()) {
    const double H = hamiltonian(c.X, c.V, c.eq.density.dim() == 1 ? RieszKernel::make(1, 0.0) : RieszKernel::make(2, 0.0));
    worst = std::max(worst, splitting_residual(c.X, c.eq, c.V) / std::abs(H));
  }
  o.require(worst <= 1e-8, fmt("max relative splitting residual %.2e <= 1e-8 over 100 configurations", worst));
  return o;
}

Outcome blowup() {
  Outcome o;
  double worst = 0.0;
  for (const auto& c : sweep()) {
    const RieszKernel k = RieszKernel::make(c.X.d, 0.0);
    worst = std::max(worst, blowup_scaling_residual(c.X, c.eq.density, k, true));
  }
  o.require(worst <= 1e-10, fmt("max relative scaling residual %.2e <= 1e-10", worst));
  return o;
}

Outcome transport() {
  Outcome o;
  struct Case {
    RieszKernel k;
    Density mu;
  };
  const Case cases[] = {{RieszKernel::make(2, 0.0), Density::uniform_ball(2, 1.0)},
                        {RieszKernel::make(1, 0.0), Density::semicircle(2.0)},
                        {RieszKernel::make(1, 0.5), Density::uniform_ball(1, 1.0)}};
  Rng rng(33);
  double s1_lo = 1e9, s1_hi = -1e9, s2_lo = 1e9, s2_hi = -1e9;
  for (const auto& c : cases) {
    const int d = c.k.d;
    const Configuration X = random_in_ball(d, 12, c.mu.radius(), rng);
    const TransportField v = TransportField::trigonometric(d, 0.3, 5 + d);
    const double A1 = a_n(X, c.mu, v, 1, c.k), A2 = a_n(X, c.mu, v, 2, c.k);
    std::vector<double> lt, r1, r2;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double D = transported_increment(X, c.mu, v, t, c.k);
      lt.push_back(std::log(t));
      r1.push_back(std::log(std::abs(D - t * A1)));
      r2.push_back(std::log(std::abs(D - t * A1 - 0.5 * t * t * A2)));
    }
    const double s1 = slope_fit(lt, r1), s2 = slope_fit(lt, r2);
    s1_lo = std::min(s1_lo, s1);
    s1_hi = std::max(s1_hi, s1);
    s2_lo = std::min(s2_lo, s2);
    s2_hi = std::max(s2_hi, s2);
  }
  o.require(s1_lo >= 1.9 && s1_hi <= 2.1, fmt("A1 remainder slopes in [%.3f, %.3f] (2 +- 0.1)", s1_lo, s1_hi));
  o.require(s2_lo >= 2.8 && s2_hi <= 3.2, fmt("A1+A2 remainder slopes in [%.3f, %.3f] (3 +- 0.2)", s2_lo, s2_hi));
  const RieszKernel k1 = RieszKernel::make(1, -1.0);
  double amax = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const Configuration X = random_in_ball(1, 20, 1.0, rng);
    const TransportField v = TransportField::trigonometric(1, 0.5, 100 + rep);
    amax = std::max(amax, std::abs(a_n(X, Density::uniform_ball(1, 1.0), v, 2, k1)));
  }
  o.require(amax == 0.0, fmt("1D Coulomb max |A2| = %.1e (exactly 0)", amax));
  return o;
}

Outcome equilibrium() {
  Outcome o;
  struct Case {
    Potential V;
    RieszKernel k;
  };
  const Case cases[] = {{Potential::quadratic(0.5), RieszKernel::make(2, 0.0)},
                        {Potential::quadratic(1.7), RieszKernel::make(2, 0.0)},
                        {Potential::quadratic(0.25), RieszKernel::make(1, 0.0)},
                        {Potential::quadratic(1.0), RieszKernel::make(1, 0.0)},
                        {Potential::quadratic(0.5), RieszKernel::make(3, 1.0)},
                        {Potential::quadratic(0.5), RieszKernel::make(4, 2.0)},
                        {Potential::quadratic(0.5), RieszKernel::make(1, -1.0)}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const EquilibriumResult eq = analytic_equilibrium(c.V, c.k);
    worst = std::max({worst, eq.residual.on_support, -eq.residual.off_support});
  }
  o.require(worst <= 1e-8, fmt("E-L residual %.2e <= 1e-8 over %.0f analytic families", worst, std::size(cases)));

  const ObstacleResult r = obstacle_solve(Potential::quadratic(0.5));
  const double h = r.grid.spacing;
  o.require(std::abs(r.radius_max - 1.0) <= h && r.grid.shape[0] == 128,
            fmt("obstacle radius %.4f vs 1 within spacing %.4f", r.radius_max, h));
  double err = 0.0;
  std::vector<double> x(2);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.grid.node(i, x);
    if (std::hypot(x[0], x[1]) <= 0.8 && r.coincidence[i]) err = std::max(err, std::abs(r.mu[i] * pi - 1.0));
  }
  o.require(err <= 0.01, fmt("interior |mu - Delta V / 2pi| / (1/pi) = %.1e <= 1e-2", err));
  return o;
}

Outcome thermal() {
  Outcome o;
  const RieszKernel k = RieszKernel::make(2, 0.0);
  {
    // V = |x|^2 + |x|^4 / 16 has Delta V = 4 + |x|^2.
    const Potential V = Potential::radial_poly(1.0, 1.0 / 16.0);
    const double theta = 100.0;
    const GridSpec g = GridSpec::square(2, 1.2, 128);
    const ThermalResult r = thermal_equilibrium(V, k, theta, g);
    double err = 0.0, f0 = 0.0;
    std::vector<double> x(2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.node(i, x);
      if (std::hypot(x[0], x[1]) > 0.2) continue;
      err = std::max(err, std::abs(r.density.values()[i] - f_iterate(V, 2, theta, 1, x)));
      f0 = std::max(f0, f_iterate(V, 2, theta, 0, x));
    }
    const double tol = 5.0 / (theta * theta) * f0;
    o.require(err <= tol, fmt("theta=100 |mu_theta - f1| = %.2e <= 5 theta^-2 f0 = %.2e", err, tol));
  }
  {
    const Potential V = Potential::quadratic(0.5);
    const GridSpec g = GridSpec::square(2, 1.7, 96);
    auto rel = [&](double theta, double rin) {
      const ThermalResult r = thermal_equilibrium(V, k, theta, g);
      double e = 0.0;
      std::vector<double> x(2);
      for (std::size_t i = 0; i < g.size(); ++i) {
        g.node(i, x);
        if (std::hypot(x[0], x[1]) <= rin) e = std::max(e, std::abs(r.density.values()[i] * pi - 1.0));
      }
      return e;
    };
    const double e400 = rel(400.0, 0.1), e100 = rel(100.0, 0.1);
    o.require(e400 <= 1e-9, fmt("quadratic V: |mu_theta / f0 - 1| = %.1e <= 1e-9 at theta=400, |x|<=0.1", e400));
    o.detail += fmt(" (theta=100: %.1e, boundary-layer tail)", e100);
  }
  return o;
}

Outcome jellium_1d() {
  Outcome o;
  double w = 0.0, m = 0.0;
  for (int N : {2, 4, 8, 16}) {
    std::vector<double> pts(N);
    for (int i = 0; i < N; ++i) pts[i] = i + 0.37;
    const Lattice L = Lattice::hypercubic(1, N);
    w = std::max(w, std::abs(W_periodic(TorusConfig(L, Configuration(1, pts)), 0.0) + 0.5 * std::log(2.0 * pi)));
    m = std::max(m, std::abs(madelung(L, 0.0) + std::log(2.0 * pi / N) / (2.0 * pi)));
  }
  o.require(w <= 1e-10, fmt("|W + log(2 pi)/2| = %.1e <= 1e-10", w));
  o.require(m <= 1e-9, fmt("|madelung + log(2 pi/N)/(2 pi)| = %.1e <= 1e-9", m));
  return o;
}

Outcome lattice() {
  Outcome o;
  const ScanResult r = lattice_scan_2d(50, 0.0);
  const bool at_tri = std::abs(r.argmin.real() - 0.5) < 1e-12 && std::abs(r.argmin.imag() - std::sqrt(3.0) / 2) < 1e-12;
  o.require(at_tri, fmt("argmin tau = %.6f + %.6fi over %.0f nodes", r.argmin.real(), r.argmin.imag(),
                        static_cast<double>(r.table.size())));
  const std::complex<double> tri(0.5, std::sqrt(3.0) / 2), sq(0.0, 1.0);
  const double Wt = lattice_energy_2d(tri, 0.0), Ws = lattice_energy_2d(sq, 0.0);
  const double et = std::abs(Wt - oracle::kronecker_lattice_energy(tri));
  const double es = std::abs(Ws - oracle::kronecker_lattice_energy(sq));
  o.require(Ws > Wt && std::max(et, es) < 1e-8,
            fmt("W(square) - W(tri) = %.6f, Ewald vs Kronecker error %.1e < 1e-8", Ws - Wt, std::max(et, es)));
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> u(-0.3, 0.3), p(0.0, 1.0);
  double split = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 1 + rep % 3;
    const double s = d == 1 ? 0.5 : (d == 2 ? (rep % 2 ? 0.0 : 1.0) : 1.0);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) += u(gen);
    const Lattice L(B);
    std::vector<double> x(d);
    for (double& v : x) v = p(gen);
    EwaldOptions base;
    const double G1 = green_periodic(L, s, x, base), M1 = madelung(L, s, base);
    for (double a : {0.5, 0.8, 1.5, 2.0}) {
      EwaldOptions e;
      e.split = a;
      split = std::max({split, std::abs(green_periodic(L, s, x, e) - G1), std::abs(madelung(L, s, e) - M1)});
    }
  }
  o.require(split <= 1e-9, fmt("Ewald split dependence %.1e <= 1e-9", split));
  return o;
}

Outcome clt() {
  Outcome o;
  const Density disk = Density::uniform_ball(2, 1.0);
  const double l = 0.7;
  const TestFunction xi = TestFunction::bump({0.0, 0.0}, l);
  const CltReport r = clt_harness(ginibre_500(), disk, xi, 2.0);
  o.require(r.ratio >= 0.75 && r.ratio <= 1.25,
            fmt("N=500 M=400 variance ratio %.3f +- %.3f in [0.75, 1.25]", r.ratio, r.variance_stderr / r.predicted_variance));
  o.require(r.normality.ad_pvalue > 0.01, fmt("AD p = %.3f > 0.01", r.normality.ad_pvalue));
  // Trend as N doubles from the exact finite-N variance (Kostlan).
  auto f = [l](double t) { return t < l * l ? std::exp(1.0 - 1.0 / (1.0 - t / (l * l))) : 0.0; };
  const double k500 = oracle::kostlan_variance(500, f, l * l) / r.predicted_variance;
  const double k1000 = oracle::kostlan_variance(1000, f, l * l) / r.predicted_variance;
  o.require(std::abs(k1000 - 1.0) < std::abs(k500 - 1.0), fmt("exact ratio %.4f (N=500) -> %.4f (N=1000)", k500, k1000));
  const double z = std::abs(r.ratio - k500) * r.predicted_variance / r.variance_stderr;
  o.require(z < 3.0, fmt("sampled vs exact N=500 variance at %.2f sigma", z));
  return o;
}

Outcome sampler() {
  Outcome o;
  const std::size_t N = 64;
  const GibbsModel model = GibbsModel::make(RieszKernel::make(1, 0.0), Potential::quadratic(0.25), 2.0, N);
  const Density sc = Density::semicircle(2.0);
  const TestFunction xi = TestFunction::bump({0.0}, 1.0);
  const double m1 = xi.moment(sc, 1);

  std::vector<double> ref;
  for (std::uint64_t m = 0; m < 20000; ++m) ref.push_back(fluct(hermite_beta_sample(N, 2.0, 900000 + m), m1, xi));
  const auto [ref_me, ref_ve] = iid_errors(ref);
  const double ref_m = mean_of(ref), ref_v = var_of(ref);

  // Unadjusted Langevin is biased by near-collisions: about 130 h in Var down
  // to h ~ 2.5e-4, then rare large kicks h/(N gap) that do not shrink with h.
  // It runs at a small step over T = 500; MALA is exact.
  struct Run {
    bool mala;
    double h;
    std::size_t steps, every;
    std::uint64_t seed;
  };
  auto chain = [&](const Run& run) {
    std::vector<double> obs;
    ChainOptions c;
    c.step = run.h;
    c.n_steps = run.steps;
    c.seed = run.seed;
    c.observe_every = run.every;
    c.observer = [&](std::size_t s, const Configuration& X) {
      if (s * run.h > 2.0) obs.push_back(fluct(X, m1, xi));
    };
    const Configuration X0 = hermite_beta_sample(N, 2.0, run.seed);
    const ChainState st = run.mala ? mala_run(model, X0, c) : langevin_run(model, X0, c);
    return std::pair{batch_means(obs), st.acceptance_rate()};
  };
  for (const Run& run : {Run{false, 5e-5, 10000000, 50, 16}, Run{true, 3e-3, 1000000, 10, 17}}) {
    const bool mala = run.mala;
    const auto [b, acc] = chain(run);
    const double zm = std::abs(b[0] - ref_m) / std::hypot(b[1], ref_me);
    const double zv = std::abs(b[2] - ref_v) / std::hypot(b[3], ref_ve);
    const std::string name = mala ? "MALA" : "Langevin";
    o.require(zm <= 3.0 && zv <= 3.0,
              name + fmt(" E[Fluct] %.4f vs %.4f, Var %.4f", b[0], ref_m, b[2]) +
                  fmt(" vs %.4f (%.1f, %.1f sigma)", ref_v, zm, zv));
    if (mala) o.detail += fmt(" acceptance %.2f", acc);
  }

  // Two particles: gap histogram of independent MALA chains vs quadrature.
  const GibbsModel two = GibbsModel::make(RieszKernel::make(1, 0.0), Potential::quadratic(0.25), 2.0, 2);
  std::vector<double> edges;
  for (int i = 0; i <= 12; ++i) edges.push_back(0.3 * i);
  std::vector<double> p = oracle::two_particle_gap_bins([](double x) { return 0.25 * x * x; }, two.theta(), edges, 12.0);
  p.push_back(1.0 - std::accumulate(p.begin(), p.end(), 0.0));
  const std::size_t chains = 4000;
  std::vector<double> count(p.size(), 0.0);
  for (std::size_t c = 0; c < chains; ++c) {
    ChainOptions co;
    co.step = 0.05;
    co.n_steps = 1000;
    co.seed = 4242;
    co.stream = c;
    const ChainState st = mala_run(two, Configuration(1, {-0.5, 0.5}), co);
    const double gap = std::abs(st.X.points[0] - st.X.points[1]);
    const auto it = std::upper_bound(edges.begin(), edges.end(), gap);
    count[std::min<std::size_t>(it - edges.begin() - 1, p.size() - 1)] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) chi2 += std::pow(count[b] - chains * p[b], 2) / (chains * p[b]);
  const double pval = boost::math::cdf(boost::math::complement(boost::math::chi_squared(p.size() - 1.0), chi2));
  o.require(pval > 0.01, fmt("2-particle chi2 = %.1f on %.0f dof, p = %.3f", chi2, p.size() - 1.0, pval));
  return o;
}

Outcome minimizers() {
  Outcome o;
  const Potential V = Potential::quadratic(0.5);
  const RieszKernel k = RieszKernel::make(2, 0.0);
  std::vector<double> gaps;
  double zmax = 0.0;
  for (std::size_t N : {16, 32, 64, 128}) {
    Rng rng(55, N);
    const MinimizeResult r = minimize_energy(GibbsModel::make(k, V, 2.0, N), random_in_ball(2, N, 1.0, rng));
    zmax = std::max(zmax, r.max_zeta);
    gaps.push_back(r.min_gap_scaled);
  }
  o.require(zmax <= 1e-6, fmt("max zeta(x_i) = %.1e <= 1e-6", zmax));
  const double m = mean_of(gaps);
  double dev = 0.0;
  for (double g : gaps) dev = std::max(dev, std::abs(g / m - 1.0));
  o.require(m > 0.0 && dev <= 0.3, fmt("min gap * N^1/2 = %.3f (%.3f .. %.3f)", m, *std::min_element(gaps.begin(), gaps.end()),
                                       *std::max_element(gaps.begin(), gaps.end())) +
                                       fmt(", max deviation %.0f%% <= 30%%", 100 * dev));
  return o;
}

Outcome hyperuniformity() {
  Outcome o;
  const Density disk = Density::uniform_ball(2, 1.0);
  std::vector<double> radii;
  for (double R = 0.12; R <= 0.48; R += 0.02) radii.push_back(R);
  const double c[2] = {0.0, 0.0};
  const NumberVarianceCurve g = number_variance_curve(ginibre_500(), disk, radii, c);
  o.require(g.slope <= 0.7, fmt("Ginibre slope %.3f +- %.3f <= 0.7", g.slope, g.slope_stderr));
  const NumberVarianceCurve p = number_variance_curve(poisson_ensemble(disk, 500.0, 4000, 77), disk, radii, c);
  o.require(std::abs(p.slope - 1.0) <= 0.1, fmt("Poisson slope %.3f +- %.3f in 1 +- 0.1", p.slope, p.slope_stderr));
  return o;
}

Outcome properties() {
  Outcome o;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(1e-3, 4.0);
  double split = 0.0;
  for (const RieszKernel& k : {RieszKernel::make(1, -1.0), RieszKernel::make(1, 0.0), RieszKernel::make(2, 0.0),
                               RieszKernel::make(2, 1.0), RieszKernel::make(3, 1.0), RieszKernel::make(3, 2.5)}) {
    for (int i = 0; i < 1000; ++i) {
      const double r = u(gen), eta = u(gen);
      const double g = eval_g(k, r);
      split = std::max(split, std::abs(eval_g_eta(k, r, eta) + eval_f_eta(k, r, eta) - g) / std::max(1.0, std::abs(g)));
    }
  }
  o.require(split <= 4e-16, fmt("g_eta + f_eta - g = %.1e", split));

  double newton = 0.0;
  for (int d : {2, 3}) {
    const RieszKernel k = RieszKernel::make(d, d - 2.0);
    const SmearedCharge q{std::vector<double>(d, 0.0), 0.6};
    for (double r : {0.2, 0.4, 0.9, 1.0, 3.0}) {
      std::vector<double> x(d, 0.0);
      x[0] = r * 0.8;
      x[d - 1] = r * 0.6;
      newton = std::max(newton, std::abs(smeared_potential(k, q, x) - eval_g_eta(k, r, 0.6)));
    }
  }
  o.require(newton <= 1e-8, fmt("Newton sphere property %.1e <= 1e-8", newton));

  Rng rng(12);
  const Density disk = Density::uniform_ball(2, 1.0);
  const RieszKernel k2 = RieszKernel::make(2, 0.0);
  const Configuration X = random_in_ball(2, 40, 1.0, rng);
  const double F = modulated_energy(X, disk, k2);
  Configuration P(2, {});
  for (std::size_t i = X.size(); i-- > 0;) P.points.insert(P.points.end(), X.point(i).begin(), X.point(i).end());
  Configuration T = X;
  const std::vector<double> b = {0.4, -0.9};
  T.translate(b);
  const double dp = std::abs(modulated_energy(P, disk, k2) - F) / std::abs(F);
  const double dt = std::abs(modulated_energy(T, Density::uniform_ball(2, 1.0, 1.0, b), k2) - F) / std::abs(F);
  o.require(std::max(dp, dt) <= 1e-12, fmt("F_N permutation %.1e, translation %.1e", dp, dt));

  const Configuration Y(2, disk.sample_points(rng, 500));
  std::size_t inner = 0, ann = 0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    const double r = std::hypot(Y.point(i)[0], Y.point(i)[1]);
    inner += r < 0.3;
    ann += r >= 0.3 && r < 0.6;
  }
  const double c[2] = {0.0, 0.0};
  const double lhs = discrepancy(Y, disk, c, 0.6);
  const double rhs = discrepancy(Y, disk, c, 0.3) + (ann - 500.0 * (0.36 - 0.09));
  o.require(std::abs(lhs - rhs) <= 1e-12 && std::abs(discrepancy(Y, disk, c, 0.3) - (inner - 45.0)) <= 1e-12,
            fmt("discrepancy additivity %.1e", std::abs(lhs - rhs)));

  const GibbsModel m = GibbsModel::make(k2, Potential::quadratic(0.5), 2.0, 20);
  const Configuration X0 = random_in_ball(2, 20, 1.0, rng);
  ChainOptions co;
  co.n_steps = 300;
  co.seed = 5;
  bool same = langevin_run(m, X0, co).X.points == langevin_run(m, X0, co).X.points;
  same = same && mala_run(m, X0, co).X.points == mala_run(m, X0, co).X.points;
  same = same && ginibre_sample(40, 3).points == ginibre_sample(40, 3).points;
  same = same && hermite_beta_sample(40, 1.5, 3).points == hermite_beta_sample(40, 1.5, 3).points;
  same = same && ginibre_ensemble(20, 6, 1, 1).samples.back().points == ginibre_ensemble(20, 6, 1, 3).samples.back().points;
  o.require(same, "seed determinism bitwise");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "splitting identity", 10, splitting},     {2, "blow-up scaling", 5, blowup},
      {3, "transport derivatives", 30, transport},  {4, "equilibrium measures", 60, equilibrium},
      {5, "thermal equilibrium", 60, thermal},      {6, "jellium 1D closed form", 5, jellium_1d},
      {7, "triangular lattice", 120, lattice},      {8, "CLT at desk scale", 600, clt},
      {9, "sampler cross-validation", 600, sampler}, {10, "minimizer structure", 300, minimizers},
      {11, "hyperuniformity", 300, hyperuniformity}, {12, "property suite", 60, properties},
  };
  std::set<int> want;
  for (int i = 1; i < argc; ++i) want.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!want.empty() && !want.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("[%s] %2d %-26s %s [%.1f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs, c.budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
