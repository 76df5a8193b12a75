// Exact solution paths: branch-and-bound over the linearized program, and an
// exhaustive enumeration oracle for tiny instances.

#ifndef VPART_EXACT_SOLVER_H_
#define VPART_EXACT_SOLVER_H_

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "vpart/instance.h"
#include "vpart/partitioning.h"
#include "vpart/solve_report.h"

namespace vpart {

struct ExactConfig {
  double time_limit_seconds = 1800;
  // Relative gap between incumbent and bound at which a node is pruned.
  double gap = 1e-3;
  bool symmetry_breaking = true;
  bool disjoint = false;
  ReplicaList required_replicas;
  // Initial incumbent; computed heuristically when absent.
  std::optional<Partitioning> warm_start;
};

SolveReport solve_exact(const Instance& instance, const ExactConfig& config = {});

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BruteForceConfig {
  double budget = 1e7;
  bool disjoint = false;
  ReplicaList required_replicas;
};

struct BruteForceResult {
  Partitioning partitioning;
  double objective = 0;
  double score = 0;
  int64_t enumerated = 0;
};

// Number of (x, y) layouts: |S|^|T| (2^|S| - 1)^|A|.
double layout_count(const Instance& instance);

// Minimizes the score over every feasible layout; ties go to the
// lexicographically smallest (x, y). Throws SizeError when layout_count
// exceeds the budget.
BruteForceResult brute_force(const Instance& instance,
                             const BruteForceConfig& config = {});

}  // namespace vpart

#endif  // VPART_EXACT_SOLVER_H_
