#ifndef VPART_SOLVE_REPORT_H_
#define VPART_SOLVE_REPORT_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vpart/partitioning.h"

namespace vpart {

// (attribute, site) pairs that must carry a replica.
using ReplicaList = std::vector<std::pair<int, int>>;

enum class SolveStatus {
  kOptimal,
  kFeasibleTimeLimit,
  kNoSolutionTimeLimit,
  // Heuristic result without an optimality proof.
  kHeuristic,
};

std::string_view to_string(SolveStatus status);

struct SolveReport {
  std::optional<Partitioning> partitioning;
  std::optional<CostBreakdown> cost;
  double objective = 0;
  double score = 0;
  // Relative distance between incumbent score and proven lower bound.
  std::optional<double> gap;
  double wall_seconds = 0;
  int64_t nodes = 0;
  SolveStatus status = SolveStatus::kNoSolutionTimeLimit;

  bool has_solution() const { return partitioning.has_value(); }
};

}  // namespace vpart

#endif  // VPART_SOLVE_REPORT_H_
