#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "riesz/kernels.hpp"
#include "riesz/modenergy.hpp"
#include "riesz/potential.hpp"
#include "riesz/rng.hpp"

namespace riesz {

// Arithmetic expression in N: numbers, N, + - * / ^, parentheses and
// log, exp, sqrt. "2", "2*N^0.5" and "log(N)" are all valid.
class BetaFormula {
 public:
  explicit BetaFormula(std::string text);
  double operator()(double N) const;
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

// Gibbs measure exp(-beta N^{-s/d} H_N) = exp(-(theta/N) H_N).
struct GibbsModel {
  RieszKernel kernel;
  Potential V;
  double beta = 2.0;
  std::size_t N = 1;

  static GibbsModel make(RieszKernel k, Potential V, double beta, std::size_t N);
  static GibbsModel make(RieszKernel k, Potential V, const BetaFormula& beta, std::size_t N);

  double theta() const;
};

// F_i = -(1/N) grad_i H_N = -(1/N) sum_{j != i} grad g(x_i - x_j) - grad V(x_i).
// Throws SingularError on coincident points.
std::vector<double> force(const Configuration& X, const GibbsModel& model);

// 0.1 / (N^{2/d} (1 + lap_bound)).
double default_step(const GibbsModel& model, double lap_bound);

using Observer = std::function<void(std::size_t step, const Configuration& X)>;

struct ChainOptions {
  double step = 0.0;  // 0 picks default_step, with halving on blow-up
  std::size_t n_steps = 1000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double domain_bound = 1e3;  // |x| beyond this counts as blow-up
  std::size_t observe_every = 0;
  Observer observer;
};

struct ChainState {
  Configuration X;
  std::size_t step = 0;
  std::uint64_t rng_counter = 0;
  double step_size = 0.0;
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  bool low_acceptance = false;

  double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / proposals : 1.0; }
};

// Euler-Maruyama: x <- x + h F + sqrt(2h/theta) xi.
ChainState langevin_run(const GibbsModel& model, const Configuration& X0, const ChainOptions& opt);

// Metropolis-adjusted Langevin with the same proposal, targeting the Gibbs
// measure exactly. low_acceptance is set when the rate stays below 1%.
ChainState mala_run(const GibbsModel& model, const Configuration& X0, const ChainOptions& opt);

// Eigenvalues of an N x N matrix with iid complex Gaussian entries of
// variance 1/N, as points of R^2.
Configuration ginibre_sample(std::size_t N, Rng& rng);
Configuration ginibre_sample(std::size_t N, std::uint64_t seed);

// Dumitriu-Edelman tridiagonal beta-Hermite eigenvalues scaled by
// sqrt(2/(beta N)): the 1D log-gas with V = x^2/4 at inverse temperature beta.
Configuration hermite_beta_sample(std::size_t N, double beta, Rng& rng);
Configuration hermite_beta_sample(std::size_t N, double beta, std::uint64_t seed);

struct MinimizeOptions {
  double tol = 1e-8;  // on |grad H_N|_inf
  std::size_t max_iter = 200000;
};

struct MinimizeResult {
  Configuration X;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  std::vector<double> energy_history;
  double max_zeta = 0.0;        // NaN when no analytic equilibrium is available
  double min_gap_scaled = 0.0;  // min gap * N^{1/d}
};

// Monotone gradient descent on H_N: Barzilai-Borwein trial steps with
// Armijo backtracking. Throws ConvergenceError on line-search failure.
MinimizeResult minimize_energy(const GibbsModel& model, const Configuration& X0, const MinimizeOptions& opt = {});

// Checkpoint CSV: "# riesz-checkpoint", "dim,N,step,beta,seed", one values
// row, then one point per row.
void write_checkpoint(std::ostream& os, const Configuration& X, std::size_t step, double beta,
                      std::uint64_t seed);
Configuration read_checkpoint(std::istream& is, std::size_t* step = nullptr, double* beta = nullptr,
                              std::uint64_t* seed = nullptr);

}  // namespace riesz
