// Simulated annealing over (x, y): each move perturbs both vectors, then
// re-optimizes one of them with the other held fixed, alternating between
// the two subproblems.

#ifndef VPART_SA_SOLVER_H_
#define VPART_SA_SOLVER_H_

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "vpart/instance.h"
#include "vpart/partitioning.h"
#include "vpart/solve_report.h"

namespace vpart {

struct SaConfig {
  int inner_loops = 50;
  double cooling = 0.9;
  double move_fraction = 0.1;
  // Frozen once the temperature falls below this fraction of the initial
  // one, or after stall_limit outer loops without a new best.
  double min_temperature_ratio = 1e-6;
  int stall_limit = 20;
  // A move whose subproblem takes longer is discarded.
  double iteration_time_limit = 30;
  double time_limit = std::numeric_limits<double>::infinity();
  uint64_t seed = 1;
  ReplicaList required_replicas;

  // Throws std::invalid_argument for out-of-range settings.
  void validate() const;
};

struct SaTraceRecord {
  int outer_loop = 0;
  double temperature = 0;
  double best_score = 0;
  double current_score = 0;
  int accepted = 0;

  bool operator==(const SaTraceRecord&) const = default;
};

struct SaTrace {
  std::vector<SaTraceRecord> records;

  bool operator==(const SaTrace&) const = default;
};

struct SaResult {
  SolveReport report;
  SaTrace trace;
  uint64_t seed = 0;
};

// Temperature at which a move 5% worse than best_score is accepted with
// probability 1/2. Throws ContractViolation unless best_score > 0.
double initial_temperature(double best_score);

// Metropolis test: always accepts delta <= 0, otherwise with probability
// exp(-delta / temperature).
bool accept_move(double delta, double temperature, std::mt19937_64& rng);

// Number of items a move touches: ceil(fraction * count), at least 1.
int move_size(double fraction, int count);

// Moves move_size(fraction, |T|) distinct transactions to another site.
std::vector<int> perturb_x(const std::vector<int>& x, int site_count,
                           double fraction, std::mt19937_64& rng);

// Gives move_size(fraction, |A|) distinct attributes one extra replica each,
// unless they already sit on every site.
std::vector<SiteSet> perturb_y(const std::vector<SiteSet>& y, int site_count,
                               double fraction, std::mt19937_64& rng);

// Replicas optimal for a fixed x: forced and required replicas, voluntary
// replicas with negative score delta, and one coverage replica at the
// cheapest site for each attribute still unplaced.
std::vector<SiteSet> solve_subproblem_fix_x(const Instance& instance,
                                            const DerivedCoefficients& derived,
                                            const std::vector<int>& x,
                                            const ReplicaList& required = {});

// Greedy assignment for a fixed y, heaviest transactions first. Throws
// FeasibilityError when some transaction has no site holding all its reads.
std::vector<int> solve_subproblem_fix_y(const Instance& instance,
                                        const DerivedCoefficients& derived,
                                        const std::vector<SiteSet>& y);

SaResult solve_sa(const Instance& instance, const SaConfig& config = {});

// Runs seeds seed, seed+1, ..., seed+runs-1 concurrently and keeps the best
// score (lowest seed on ties).
SaResult solve_sa_runs(const Instance& instance, const SaConfig& config,
                       int runs);

}  // namespace vpart

#endif  // VPART_SA_SOLVER_H_
