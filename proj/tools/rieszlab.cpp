// rieszlab: experiments on Coulomb and Riesz gases from a config file.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/errors.hpp"
#include "riesz/jellium.hpp"
#include "riesz/modenergy.hpp"
#include "riesz/sampler.hpp"
#include "riesz/statistics.hpp"

#ifndef RIESZ_VERSION_STAMP
#define RIESZ_VERSION_STAMP "unknown"
#endif

using nlohmann::json;
using namespace riesz;
using rieszlab::Config;
using rieszlab::ConfigError;

namespace {

constexpr int kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitCheck = 4;

struct Run {
  std::string command;  // "stats clt", "energy", ...
  std::string stem;     // output.dir / prefix
  Config cfg;
  unsigned threads = 1;
  bool check = false;
  json result = json::object();
  json checks = json::array();

  void require(const std::string& name, bool ok, double value, double tol) {
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"tolerance", tol}});
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) return false;
    return true;
  }

  void echo(std::ostream& os) const {
    os << "# rieszlab " << RIESZ_VERSION_STAMP << "\n# command " << command << "\n";
    for (const auto& [k, v] : cfg.entries()) os << "# " << k << " = " << v << "\n";
  }

  std::ofstream open(const std::string& suffix) const {
    const std::string path = stem + suffix;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write '" + path + "'");
    os.precision(17);
    return os;
  }

  // CSV with the config echo ahead of the body.
  template <class F>
  void csv(const std::string& suffix, F&& body) {
    std::ofstream os = open(suffix);
    echo(os);
    body(os);
    result["artifacts"].push_back(std::filesystem::path(stem + suffix).filename().string());
  }

  void finish() {
    json out = {{"tool", "rieszlab"}, {"version", RIESZ_VERSION_STAMP}, {"command", command},
                {"config", cfg.entries()}, {"result", result}};
    if (check) out["checks"] = checks;
    std::ofstream os = open(".json");
    os << out.dump(2) << "\n";
  }
};

RieszKernel kernel_of(const Config& c) {
  return RieszKernel::make(static_cast<int>(c.integer("model.d")), c.real("model.s"));
}

Potential potential_of(const Config& c) { return Potential::radial_poly(c.real("model.c2"), c.real("model.c4")); }

GibbsModel model_of(const Config& c) {
  return GibbsModel::make(kernel_of(c), potential_of(c), BetaFormula(c.str("model.beta")), c.count("model.N"));
}

// Reader input with our echo lines removed, so library readers see their
// own header first.
std::istringstream strip_echo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::string body, line;
  bool started = false;
  while (std::getline(in, line)) {
    if (!started && line.rfind("# riesz-", 0) != 0 && line.rfind("#", 0) == 0) continue;
    started = true;
    body += line + "\n";
  }
  return std::istringstream(body);
}

// Start configuration: task.input if given, else iid points uniform on
// spread x the droplet radius.
Configuration start_config(const Config& c, const EquilibriumResult* eq) {
  const std::size_t N = c.count("model.N");
  const int d = static_cast<int>(c.integer("model.d"));
  if (!c.str("task.input").empty()) {
    std::istringstream is = strip_echo(c.str("task.input"));
    Configuration X = read_checkpoint(is);
    if (X.d != d || X.size() != N) throw ConfigError("task.input: dimension or N does not match the model");
    return X;
  }
  Rng rng(c.seed(), 1);
  const double R = (eq ? eq->density.radius() : 1.0) * c.positive("task.spread");
  return Configuration(d, Density::uniform_ball(d, R).sample_points(rng, N));
}

void write_config(Run& r, const std::string& suffix, const Configuration& X, std::size_t step) {
  const double beta = BetaFormula(r.cfg.str("model.beta"))(static_cast<double>(X.size()));
  r.csv(suffix, [&](std::ostream& os) { write_checkpoint(os, X, step, beta, r.cfg.seed()); });
}

// ---------------------------------------------------------------- energy

void cmd_energy(Run& r) {
  const Config& c = r.cfg;
  const RieszKernel k = kernel_of(c);
  const Potential V = potential_of(c);
  const EquilibriumResult eq = analytic_equilibrium(V, k);
  const Configuration X = start_config(c, &eq);
  const double N = static_cast<double>(X.size());
  const double H = hamiltonian(X, V, k), F = modulated_energy(X, eq.density, k);
  double zsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) zsum += zeta(X.point(i), eq, V);
  r.result["H_N"] = H;
  r.result["F_N"] = F;
  r.result["N2_E"] = N * N * eq.energy;
  r.result["N_sum_zeta"] = N * zsum;
  r.result["blowup_residual"] = blowup_scaling_residual(X, eq.density, k, true);
  const bool split = c.flag("task.splitting");
  if (split) {
    const double res = splitting_residual(X, eq, V);
    r.result["splitting_residual"] = res;
    r.result["splitting_relative"] = res / std::abs(H);
  }
  write_config(r, "_points.csv", X, 0);
  if (r.check) {
    const double rel = splitting_residual(X, eq, V) / std::abs(H);
    r.require("splitting relative residual", rel <= 1e-8, rel, 1e-8);
  }
}

// ------------------------------------------------------------- eqmeasure

void cmd_eqmeasure(Run& r) {
  const Config& c = r.cfg;
  const Potential V = potential_of(c);
  const std::string method = c.str("task.method");
  if (method == "analytic") {
    const RieszKernel k = kernel_of(c);
    const EquilibriumResult eq = analytic_equilibrium(V, k);
    r.result["density"] = eq.density.kind_name();
    r.result["support_radius"] = eq.density.radius();
    r.result["c"] = eq.c;
    r.result["energy"] = eq.energy;
    r.result["residual_on_support"] = eq.residual.on_support;
    r.result["residual_off_support"] = eq.residual.off_support;
    if (r.check) {
      const double res = std::max(eq.residual.on_support, -eq.residual.off_support);
      r.require("E-L residual", res <= 1e-8, res, 1e-8);
    }
  } else if (method == "obstacle") {
    if (c.integer("model.d") != 2 || c.real("model.s") != 0.0)
      throw ConfigError("eqmeasure obstacle: needs model.d = 2 and model.s = 0");
    ObstacleOptions o;
    o.n = static_cast<int>(c.count("task.grid", 8));
    o.half_width = c.positive("task.half_width");
    const ObstacleResult ob = obstacle_solve(V, o);
    r.result["c"] = ob.c;
    r.result["mass"] = ob.mass;
    r.result["radius_max"] = ob.radius_max;
    r.result["radius_area"] = ob.radius_area;
    r.result["complementarity"] = ob.complementarity;
    r.result["sweeps"] = ob.sweeps;
    r.result["spacing"] = ob.grid.spacing;
    r.result["touches_boundary"] = ob.touches_boundary;
    r.csv("_density.csv", [&](std::ostream& os) { ob.density().write_csv(os); });
    if (r.check) {
      r.require("droplet inside the box", !ob.touches_boundary, ob.radius_max, o.half_width);
      if (V.is_pure_quadratic()) {
        const double R = analytic_equilibrium(V, RieszKernel::make(2, 0.0)).density.radius();
        const double f0 = 4.0 * V.c2() / (2.0 * std::numbers::pi);
        double err = 0.0;
        std::vector<double> x(2);
        for (std::size_t i = 0; i < ob.grid.size(); ++i) {
          ob.grid.node(i, x);
          if (std::hypot(x[0], x[1]) <= 0.8 * R && ob.coincidence[i]) err = std::max(err, std::abs(ob.mu[i] / f0 - 1.0));
        }
        r.require("radius within one spacing", std::abs(ob.radius_max - R) <= ob.grid.spacing,
                  std::abs(ob.radius_max - R), ob.grid.spacing);
        r.require("interior density relative error", err <= 0.01, err, 0.01);
      }
    }
  } else {
    throw ConfigError("task.method: expected analytic or obstacle, got '" + method + "'");
  }
}

// --------------------------------------------------------------- thermal

void cmd_thermal(Run& r) {
  const Config& c = r.cfg;
  const RieszKernel k = kernel_of(c);
  const Potential V = potential_of(c);
  const int d = k.d;
  const double theta = c.positive("task.theta");
  const int order = static_cast<int>(c.integer("task.order"));
  if (order < 0) throw ConfigError("task.order: must be nonnegative");
  const GridSpec g = GridSpec::square(d, c.positive("task.half_width"), static_cast<int>(c.count("task.grid", 8)));
  const ThermalResult t = thermal_equilibrium(V, k, theta, g);
  const double rin = c.positive("task.interior");
  double err = 0.0, f0 = 0.0;
  std::vector<double> x(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.node(i, x);
    double rr = 0.0;
    for (double v : x) rr += v * v;
    if (std::sqrt(rr) > rin) continue;
    err = std::max(err, std::abs(t.density.values()[i] - f_iterate(V, d, theta, order, x)));
    f0 = std::max(f0, f_iterate(V, d, theta, 0, x));
  }
  r.result["theta"] = theta;
  r.result["c_theta"] = t.c_theta;
  r.result["el_residual"] = t.el_residual;
  r.result["energy"] = t.energy;
  r.result["iterations"] = t.iterations;
  r.result["interior_error"] = err;
  r.result["f0_scale"] = f0;
  r.csv("_density.csv", [&](std::ostream& os) { t.density.write_csv(os); });
  if (r.check) {
    const double tol = 5.0 * std::pow(theta, -(order + 1.0)) * f0;
    r.require("interior |mu_theta - f_k|", err <= tol, err, tol);
  }
}

// ---------------------------------------------------------------- sample

void cmd_sample(Run& r, const std::string& mode) {
  const Config& c = r.cfg;
  const std::uint64_t seed = c.seed();
  if (mode == "ginibre" || mode == "hermite") {
    const std::size_t N = c.count("model.N"), M = c.count("task.M");
    const double beta = BetaFormula(c.str("model.beta"))(static_cast<double>(N));
    const SampleEnsemble ens =
        mode == "ginibre" ? ginibre_ensemble(N, M, seed, r.threads) : hermite_ensemble(N, beta, M, seed, r.threads);
    const double edge = mode == "ginibre" ? 1.1 : 2.2;
    std::size_t outside = 0;
    r.csv("_samples.csv", [&](std::ostream& os) {
      os << (mode == "ginibre" ? "sample,seed,i,x,y\n" : "sample,seed,i,x\n");
      for (std::size_t m = 0; m < ens.size(); ++m) {
        const Configuration& X = ens.samples[m];
        for (std::size_t i = 0; i < X.size(); ++i) {
          os << m << ',' << ens.seeds[m] << ',' << i;
          double rr = 0.0;
          for (double v : X.point(i)) {
            os << ',' << v;
            rr += v * v;
          }
          os << '\n';
          outside += std::sqrt(rr) > edge;
        }
      }
    });
    const double frac = static_cast<double>(outside) / (N * M);
    r.result["N"] = N;
    r.result["M"] = M;
    r.result["beta"] = mode == "ginibre" ? 2.0 : beta;
    r.result["fraction_outside"] = frac;
    r.result["edge"] = edge;
    if (r.check) r.require("fraction beyond 1.1 x the support edge", frac <= 0.05, frac, 0.05);
    return;
  }

  const GibbsModel model = model_of(c);
  std::optional<EquilibriumResult> eq;
  try {
    eq = analytic_equilibrium(model.V, model.kernel);
  } catch (const DomainError&) {
  }
  const Configuration X0 = start_config(c, eq ? &*eq : nullptr);
  if (mode == "minimize") {
    const MinimizeResult m = minimize_energy(model, X0);
    r.result["energy"] = m.energy;
    r.result["grad_norm"] = m.grad_norm;
    r.result["iterations"] = m.iterations;
    r.result["max_zeta"] = std::isnan(m.max_zeta) ? json(nullptr) : json(m.max_zeta);
    r.result["min_gap_scaled"] = m.min_gap_scaled;
    write_config(r, "_points.csv", m.X, m.iterations);
    r.csv("_history.csv", [&](std::ostream& os) {
      os << "iteration,H_N\n";
      for (std::size_t i = 0; i < m.energy_history.size(); ++i) os << i << ',' << m.energy_history[i] << '\n';
    });
    if (r.check && !std::isnan(m.max_zeta)) r.require("max zeta", m.max_zeta <= 1e-6, m.max_zeta, 1e-6);
    if (r.check) r.require("gradient norm", m.grad_norm <= MinimizeOptions{}.tol, m.grad_norm, MinimizeOptions{}.tol);
    return;
  }
  if (mode != "langevin" && mode != "mala")
    throw ConfigError("sample: mode must be langevin, mala, ginibre, hermite or minimize");
  ChainOptions o;
  o.step = c.real("task.step");
  if (o.step < 0.0) throw ConfigError("task.step: must be nonnegative");
  o.n_steps = c.count("task.steps");
  o.seed = seed;
  o.observe_every = c.count("task.observe_every");
  std::vector<std::pair<std::size_t, double>> trace;
  o.observer = [&](std::size_t s, const Configuration& X) {
    trace.emplace_back(s, hamiltonian(X, model.V, model.kernel));
  };
  const ChainState st = mode == "mala" ? mala_run(model, X0, o) : langevin_run(model, X0, o);
  r.result["theta"] = model.theta();
  r.result["step_size"] = st.step_size;
  r.result["steps"] = st.step;
  r.result["rng_counter"] = st.rng_counter;
  r.result["H_N_final"] = hamiltonian(st.X, model.V, model.kernel);
  if (mode == "mala") {
    r.result["acceptance_rate"] = st.acceptance_rate();
    r.result["low_acceptance"] = st.low_acceptance;
  }
  write_config(r, "_points.csv", st.X, st.step);
  r.csv("_trace.csv", [&](std::ostream& os) {
    os << "step,H_N\n";
    for (const auto& [s, H] : trace) os << s << ',' << H << '\n';
  });
  if (r.check) {
    double sup = 0.0;
    for (double v : st.X.points) sup = std::max(sup, std::abs(v));
    r.require("chain stayed bounded", std::isfinite(sup) && sup < o.domain_bound, sup, o.domain_bound);
    if (mode == "mala")
      r.require("acceptance rate above 1%", !st.low_acceptance, st.acceptance_rate(), 0.01);
  }
}

// -------------------------------------------------------------- dynamics

void cmd_dynamics(Run& r) {
  const Config& c = r.cfg;
  const GibbsModel model = model_of(c);
  const EquilibriumResult eq = analytic_equilibrium(model.V, model.kernel);
  const Configuration X0 = start_config(c, &eq);
  TrackOptions o;
  o.flow = parse_flow(c.str("task.flow"));
  o.T = c.positive("task.T");
  o.h = c.positive("task.h");
  o.snapshot_every = c.count("task.snapshot_every");
  o.noise = c.flag("task.noise");
  o.seed = c.seed();
  const TrajectoryReport t = meanfield_track(model, X0, eq, o);
  std::stringstream js;
  t.write_json(js);
  r.result = json::parse(js.str());
  r.csv("_trajectory.csv", [&](std::ostream& os) { t.write_csv(os); });
  write_config(r, "_final.csv", t.final, static_cast<std::size_t>(std::lround(o.T / o.h)));
  if (r.check) {
    if (o.flow == FlowKind::Gradient && !o.noise) {
      r.require("max energy increase per step", t.max_energy_increase <= o.h * o.h, t.max_energy_increase, o.h * o.h);
    } else if (o.flow == FlowKind::Conservative) {
      const double tol = 1e-3 * std::abs(t.hamiltonian.front());
      r.require("energy drift", t.energy_drift <= tol, t.energy_drift, tol);
    }
  }
}

// --------------------------------------------------------------- jellium

Lattice lattice_of(const Config& c, int d, double covolume) {
  const std::string kind = c.str("task.lattice");
  if (kind == "cubic") return Lattice::hypercubic(d, covolume);
  if (kind == "triangular") {
    if (d != 2) throw ConfigError("task.lattice: triangular needs model.d = 2");
    return Lattice::triangular(covolume);
  }
  throw ConfigError("task.lattice: expected cubic or triangular, got '" + kind + "'");
}

void cmd_jellium(Run& r, const std::string& mode) {
  const Config& c = r.cfg;
  const int d = static_cast<int>(c.integer("model.d"));
  const double s = c.real("model.s");
  RieszKernel::make(d, s);
  const std::size_t N = c.count("model.N");
  const double pi = std::numbers::pi;
  if (mode == "scan") {
    if (d != 2) throw ConfigError("jellium scan: needs model.d = 2");
    const ScanResult sr = lattice_scan_2d(static_cast<int>(c.count("task.grid", 2)), s, c.positive("task.im_max"));
    r.result["argmin"] = {sr.argmin.real(), sr.argmin.imag()};
    r.result["W_min"] = sr.W_min;
    r.result["resolution"] = {sr.dre, sr.dim};
    r.result["W_square"] = lattice_energy_2d({0.0, 1.0}, s);
    r.result["W_triangular"] = lattice_energy_2d({0.5, std::sqrt(3.0) / 2}, s);
    r.csv("_scan.csv", [&](std::ostream& os) { sr.write_csv(os); });
    if (r.check) {
      const double e = std::max(std::abs(sr.argmin.real() - 0.5) / sr.dre, std::abs(sr.argmin.imag() - std::sqrt(3.0) / 2) / sr.dim);
      r.require("argmin at the node nearest the triangular lattice (grid units)", e <= 0.5, e, 0.5);
    }
    return;
  }
  const Lattice L = lattice_of(c, d, static_cast<double>(N));
  r.result["lattice"] = json::parse(L.to_json());
  if (mode == "green") {
    std::vector<double> x = c.reals("task.x");
    if (x.size() == 1) x.assign(d, x[0]);
    if (static_cast<int>(x.size()) != d) throw ConfigError("task.x: needs model.d entries");
    std::vector<double> mx(x);
    for (double& v : mx) v = -v;
    const double G = green_periodic(L, s, x), Gm = green_periodic(L, s, mx);
    std::vector<double> grad(d);
    green_periodic_gradient(L, s, x, grad);
    r.result["x"] = x;
    r.result["G"] = G;
    r.result["grad_G"] = grad;
    if (r.check) r.require("G(x) = G(-x)", std::abs(G - Gm) <= 1e-12 * std::max(1.0, std::abs(G)), std::abs(G - Gm), 1e-12);
    return;
  }
  if (mode == "madelung") {
    const double m = madelung(L, s);
    r.result["madelung"] = m;
    if (r.check && d == 1 && s == 0.0) {
      const double e = std::abs(m + std::log(2.0 * pi / N) / (2.0 * pi));
      r.require("1D closed form", e <= 1e-9, e, 1e-9);
    }
    return;
  }
  // W and optimize act on N points of the torus.
  Configuration X;
  const bool given = !c.str("task.input").empty();
  if (given) {
    std::istringstream is = strip_echo(c.str("task.input"));
    X = read_checkpoint(is);
    if (X.d != d || X.size() != N) throw ConfigError("task.input: dimension or N does not match the model");
  } else if (d == 1) {
    for (std::size_t i = 0; i < N; ++i) X.points.push_back(i + 0.5);
    X.d = 1;
  } else {
    Rng rng(c.seed(), 2);
    std::vector<double> pts;
    for (std::size_t i = 0; i < N; ++i) {
      Eigen::VectorXd u(d);
      for (int j = 0; j < d; ++j) u[j] = rng.uniform();
      const Eigen::VectorXd y = L.basis() * u;
      pts.insert(pts.end(), y.data(), y.data() + d);
    }
    X = Configuration(d, pts);
  }
  const TorusConfig tc(L, X);
  if (mode == "W") {
    const double W = W_periodic(tc, s);
    r.result["W"] = W;
    write_config(r, "_points.csv", X, 0);
    if (r.check && d == 1 && s == 0.0 && !given) {
      const double e = std::abs(W + 0.5 * std::log(2.0 * pi));
      r.require("1D equally spaced closed form", e <= 1e-10, e, 1e-10);
    }
    return;
  }
  if (mode == "optimize") {
    const double W0 = W_periodic(tc, s);
    const TorusOptimizeResult o = optimize_torus(tc, s);
    r.result["W_start"] = W0;
    r.result["W"] = o.W;
    r.result["grad_norm"] = o.grad_norm;
    r.result["iterations"] = o.iterations;
    write_config(r, "_points.csv", o.config.X, o.iterations);
    r.csv("_history.csv", [&](std::ostream& os) {
      os << "iteration,W\n";
      for (std::size_t i = 0; i < o.W_history.size(); ++i) os << i << ',' << o.W_history[i] << '\n';
    });
    if (r.check) r.require("W does not increase", o.W <= W0, o.W - W0, 0.0);
    return;
  }
  throw ConfigError("jellium: mode must be green, madelung, W, scan or optimize");
}

// ----------------------------------------------------------------- stats

struct Reference {
  SampleEnsemble ens;
  Density mu;
  double beta;
};

Reference reference_of(Run& r) {
  const Config& c = r.cfg;
  const std::string sampler = c.str("task.sampler");
  const std::size_t N = c.count("model.N"), M = c.count("task.M");
  const double beta = BetaFormula(c.str("model.beta"))(static_cast<double>(N));
  if (sampler == "ginibre") {
    if (c.integer("model.d") != 2) throw ConfigError("task.sampler ginibre: needs model.d = 2");
    return {ginibre_ensemble(N, M, c.seed(), r.threads), Density::uniform_ball(2, 1.0), 2.0};
  }
  if (sampler == "hermite") {
    if (c.integer("model.d") != 1) throw ConfigError("task.sampler hermite: needs model.d = 1");
    return {hermite_ensemble(N, beta, M, c.seed(), r.threads), Density::semicircle(2.0), beta};
  }
  const EquilibriumResult eq = analytic_equilibrium(potential_of(c), kernel_of(c));
  if (sampler == "iid") return {iid_ensemble(eq.density, N, M, c.seed()), eq.density, beta};
  if (sampler == "poisson") return {poisson_ensemble(eq.density, static_cast<double>(N), M, c.seed()), eq.density, beta};
  throw ConfigError("task.sampler: expected ginibre, hermite, iid or poisson, got '" + sampler + "'");
}

std::vector<double> center_of(const Config& c, int d) {
  std::vector<double> x = c.reals("task.center");
  if (x.size() == 1) x.assign(d, x[0]);
  if (static_cast<int>(x.size()) != d) throw ConfigError("task.center: needs model.d entries");
  return x;
}

void cmd_stats(Run& r, const std::string& mode) {
  const Config& c = r.cfg;
  const Reference ref = reference_of(r);
  const int d = ref.mu.dim();
  const std::vector<double> center = center_of(c, d);
  r.result["sampler"] = ref.ens.sampler;
  r.result["M"] = ref.ens.size();
  r.result["N"] = ref.ens.N();

  if (mode == "fluct" || mode == "clt") {
    // The harness limit law is the Coulomb one; the 1D log gas has none here.
    if (mode == "clt" && ref.ens.sampler == "hermite")
      throw ConfigError("stats clt: no limit law for the 1D log gas; use stats fluct");
    const TestFunction xi = TestFunction::bump(center, c.positive("task.scale"));
    const CltReport rep = clt_harness(ref.ens, ref.mu, xi, ref.beta, mode == "clt");
    std::stringstream js;
    rep.write_json(js);
    r.result["report"] = json::parse(js.str());
    r.csv("_fluct.csv", [&](std::ostream& os) {
      os << "sample,seed,fluct\n";
      for (std::size_t m = 0; m < rep.values.size(); ++m) os << m << ',' << ref.ens.seeds[m] << ',' << rep.values[m] << '\n';
    });
    if (r.check && mode == "clt") {
      r.require("variance ratio in [0.75, 1.25]", rep.matches_prediction, rep.ratio, 0.25);
      r.require("normality p > 0.01", rep.normality.ad_pvalue > 0.01, rep.normality.ad_pvalue, 0.01);
    }
    return;
  }
  if (mode == "numbervar") {
    const std::vector<double> spec = [&] {
      std::string t = c.str("task.radii");
      for (char& ch : t)
        if (ch == ':') ch = ',';
      Config tmp;
      tmp.set("task.radii", t);
      return tmp.reals("task.radii");
    }();
    if (spec.size() != 3 || !(spec[0] > 0.0) || !(spec[1] >= spec[0]) || !(spec[2] > 0.0))
      throw ConfigError("task.radii: expected lo:hi:step with 0 < lo <= hi and step > 0");
    std::vector<double> radii;
    for (int i = 0; spec[0] + i * spec[2] <= spec[1] * (1.0 + 1e-12); ++i) radii.push_back(spec[0] + i * spec[2]);
    const NumberVarianceCurve cur = number_variance_curve(ref.ens, ref.mu, radii, center);
    r.result["slope"] = cur.slope;
    r.result["slope_stderr"] = cur.slope_stderr;
    r.result["fit_points"] = cur.fit_points;
    r.csv("_numbervar.csv", [&](std::ostream& os) { cur.write_csv(os); });
    if (r.check) {
      if (ref.ens.sampler == "poisson" || ref.ens.sampler == "iid")
        r.require("Poisson-like slope 1 +- 0.1", std::abs(cur.slope - 1.0) <= 0.1, cur.slope, 0.1);
      else
        r.require("hyperuniform slope <= 0.7", cur.slope <= 0.7, cur.slope, 0.7);
    }
    return;
  }
  if (mode == "discrepancy") {
    const double R = c.positive("task.radius");
    std::vector<double> D;
    for (const auto& X : ref.ens.samples) D.push_back(discrepancy(X, ref.mu, center, R));
    const double mean = std::accumulate(D.begin(), D.end(), 0.0) / D.size();
    double var = 0.0;
    for (double v : D) var += (v - mean) * (v - mean);
    r.result["radius"] = R;
    r.result["mean"] = mean;
    r.result["variance"] = D.size() > 1 ? json(var / (D.size() - 1)) : json(nullptr);
    r.csv("_discrepancy.csv", [&](std::ostream& os) {
      os << "sample,seed,D\n";
      for (std::size_t m = 0; m < D.size(); ++m) os << m << ',' << ref.ens.seeds[m] << ',' << D[m] << '\n';
    });
    return;
  }
  if (mode == "localfield") {
    const double w = c.positive("task.window");
    const Configuration loc = local_field(ref.ens.samples.front(), center, w);
    r.result["window"] = w;
    r.result["count"] = loc.size();
    r.result["expected_count"] = std::pow(w, d) * ref.mu.value(center);
    write_config(r, "_local.csv", loc, 0);
    return;
  }
  throw ConfigError("stats: mode must be fluct, clt, numbervar, discrepancy or localfield");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rieszlab: Coulomb and Riesz gas experiments"};
  app.set_version_flag("--version", std::string(RIESZ_VERSION_STAMP));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::vector<std::string> sets;
  unsigned threads = 1;
  bool check = false;
  app.add_option("-c,--config", config_path, "config file (key = value lines)");
  app.add_option("--set", sets, "override a config key, key=value");
  app.add_option("--threads", threads, "worker thread cap")->check(CLI::Range(1u, 1024u));
  app.add_flag("--check", check, "run acceptance assertions; exit 4 on failure");

  const auto& registry = rieszlab::key_registry();
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> switch_values;
  std::string mode;

  struct Sub {
    const char* name;
    const char* help;
    const char* modes;  // nullptr when the command takes no mode
  };
  const Sub subs[] = {
      {"energy", "H_N, F_N and the splitting identity for a configuration", nullptr},
      {"eqmeasure", "equilibrium measure (analytic or obstacle)", nullptr},
      {"thermal", "thermal equilibrium measure and expansion compare", nullptr},
      {"sample", "draw configurations", "langevin|mala|ginibre|hermite|minimize"},
      {"dynamics", "mean-field gradient or conservative flow", nullptr},
      {"jellium", "periodic Green function, Madelung constant, W, lattice scan", "green|madelung|W|scan|optimize"},
      {"stats", "fluctuation and point-process statistics", "fluct|clt|numbervar|discrepancy|localfield"},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    if (s.modes) sc->add_option("mode", mode, s.modes)->required();
    for (const auto& k : registry) {
      if (k.is_switch)
        sc->add_flag("--" + k.flag, switch_values[k.key], k.help);
      else
        sc->add_option("--" + k.flag, flag_values[k.key], k.help + " [" + k.key + "]");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Run run;
  run.threads = threads;
  run.check = check;
  CLI::App* sc = app.get_subcommands().front();
  run.command = sc->get_name() + (mode.empty() ? "" : " " + mode);

  try {
    if (!config_path.empty()) run.cfg.load_file(config_path);
    for (const auto& a : sets) run.cfg.set_assignment(a);
    for (const auto& k : registry) {
      CLI::Option* opt = sc->get_option("--" + k.flag);
      if (opt->count() == 0) continue;
      run.cfg.set(k.key, k.is_switch ? "true" : flag_values[k.key]);
    }
    std::string dir = run.cfg.str("output.dir");
    if (dir.empty()) {
      const char* env = std::getenv("RIESZLAB_OUT");
      dir = env && *env ? env : ".";
    }
    std::filesystem::create_directories(dir);
    std::string prefix = run.cfg.str("output.prefix");
    if (prefix.empty()) prefix = sc->get_name() + (mode.empty() ? "" : "_" + mode);
    run.stem = (std::filesystem::path(dir) / prefix).string();
    run.result["artifacts"] = json::array();

    const std::string& name = sc->get_name();
    if (name == "energy") cmd_energy(run);
    else if (name == "eqmeasure") cmd_eqmeasure(run);
    else if (name == "thermal") cmd_thermal(run);
    else if (name == "sample") cmd_sample(run, mode);
    else if (name == "dynamics") cmd_dynamics(run);
    else if (name == "jellium") cmd_jellium(run, mode);
    else cmd_stats(run, mode);

    run.result["artifacts"].push_back(std::filesystem::path(run.stem + ".json").filename().string());
    run.finish();
  } catch (const ConfigError& e) {
    std::cerr << "rieszlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "rieszlab: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const riesz::Error& e) {
    std::cerr << "rieszlab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "rieszlab: " << e.what() << "\n";
    return kExitConfig;
  }

  std::cout << run.command << ": wrote " << run.stem << ".json\n";
  if (run.check) {
    for (const auto& c : run.checks)
      std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["name"].get<std::string>() << ": "
                << c["value"].dump() << " (tol " << c["tolerance"].dump() << ")\n";
    if (!run.passed()) return kExitCheck;
  }
  return kExitOk;
}
