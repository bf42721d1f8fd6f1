#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "riesz/density.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/modenergy.hpp"
#include "riesz/sampler.hpp"

namespace riesz {

enum class FlowKind { Gradient, Conservative };

FlowKind parse_flow(const std::string& name);
std::string flow_name(FlowKind f);

struct TrackOptions {
  FlowKind flow = FlowKind::Gradient;
  double T = 1.0;
  double h = 1e-3;
  std::size_t snapshot_every = 10;
  bool noise = false;  // add sqrt(2h/theta) xi (gradient flow only)
  std::uint64_t seed = 0;
  double C0 = 1.0;  // constant in the normalized quantity
  // Row-major antisymmetric d x d matrix; empty selects rotation by pi/2 (d = 2).
  std::vector<double> J;
};

struct TrajectoryReport {
  std::string flow;
  std::size_t N = 0;
  int d = 0;
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> modulated_energy;  // F_N(X^t, mu_V)
  std::vector<double> hamiltonian;
  std::vector<double> bl_distance;
  std::vector<double> normalized;  // (F_N + (N/2d) log(N|mu|) 1_{s=0} + C0 N^{1+s/d}|mu|^{s/d}) / N^2
  double gronwall_rate = 0.0;      // smallest C with normalized(t) <= exp(C t) normalized(0)
  double max_energy_increase = 0.0;  // max over steps of H(t+h) - H(t)
  double energy_drift = 0.0;         // |H(T) - H(0)|
  Configuration final;

  void write_json(std::ostream& os) const;
  void write_csv(std::ostream& os) const;
};

// One step of the chosen flow with the reference frozen at mu_V.
void flow_step(Configuration& X, const GibbsModel& model, FlowKind flow, double h,
               const std::vector<double>& J);

TrajectoryReport meanfield_track(const GibbsModel& model, const Configuration& X0, const EquilibriumResult& eq,
                                 const TrackOptions& opt);

// Bounded-Lipschitz distance between (1/N) sum delta_{x_i} and mu, as the
// maximum of |int phi d(emp - mu)| over a fixed dictionary of 1-Lipschitz
// functions bounded by 1:
//   tents   min(1, (rho - |x - c|)_+), rho in {0.1, 0.2, 0.4, 0.8, 1.6},
//   cones   min(|x - c|, 1),
//   ramps   clamp(e . x - b, -1, 1) along 8 directions (2 in 1D),
// with centres c and offsets b on a 9-point-per-axis grid over the bounding
// box of the points and the support of mu.
double empirical_distance(const Configuration& X, const Density& mu, int quad_order = 48);

}  // namespace riesz
