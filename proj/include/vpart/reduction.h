// Problem-size reductions: merging attributes the workload cannot tell apart,
// and solving heavy transactions first.

#ifndef VPART_REDUCTION_H_
#define VPART_REDUCTION_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vpart/instance.h"
#include "vpart/partitioning.h"
#include "vpart/solve_report.h"

namespace vpart {

struct AttributeGrouping {
  std::vector<std::vector<int>> groups;  // original attribute ids
  std::vector<int64_t> group_width;
  std::vector<int> mapping;  // original attribute id -> group id
};

struct GroupedInstance {
  Instance instance;
  AttributeGrouping grouping;
};

// Groups attributes of the same table whose per-query access flags are
// identical. The grouped instance has one attribute per group, whose width
// is the sum of the member widths; statistics are unchanged.
GroupedInstance group_attributes(const Instance& instance,
                                 const DerivedCoefficients& derived);

// Each original attribute inherits the site set of its group.
Partitioning expand_solution(const Partitioning& grouped,
                             const AttributeGrouping& grouping);

// Transactions by descending read-access weight sum_a c3(a, t); ties by id.
std::vector<int> order_transactions_by_load(const Instance& instance,
                                            const DerivedCoefficients& derived);

// Same schema and configuration, only the listed transactions (renumbered
// in the given order) and their queries.
Instance restrict_to_transactions(const Instance& instance,
                                  const std::vector<int>& transaction_ids);

// Solves the heaviest ceil(fraction * |T|) transactions first, keeps the
// replicas found there as mandatory, then solves the full instance.
// `solve(instance, required_replicas)` returns a SolveReport.
template <typename Solve>
SolveReport solve_prioritized(const Instance& instance,
                              const DerivedCoefficients& derived,
                              double fraction, Solve&& solve) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<int> order = order_transactions_by_load(instance, derived);
  const int count = std::clamp(
      static_cast<int>(std::ceil(fraction * static_cast<double>(order.size()))),
      1, static_cast<int>(order.size()));
  const std::vector<int> heavy(order.begin(), order.begin() + count);

  ReplicaList required;
  int64_t nodes = 0;
  if (count < static_cast<int>(order.size())) {
    SolveReport first = solve(restrict_to_transactions(instance, heavy),
                              ReplicaList{});
    nodes += first.nodes;
    if (first.partitioning) {
      for (int a = 0; a < instance.attribute_count(); ++a) {
        first.partitioning->y[a].for_each(
            [&](int s) { required.emplace_back(a, s); });
      }
    }
  }
  SolveReport report = solve(instance, required);
  report.nodes += nodes;
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

}  // namespace vpart

#endif  // VPART_REDUCTION_H_
