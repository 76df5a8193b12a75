// Candidate solutions and the cost model that scores them.

#ifndef VPART_PARTITIONING_H_
#define VPART_PARTITIONING_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "vpart/instance.h"
#include "vpart/site_set.h"

namespace vpart {

// x: executing site per transaction. y: replica sites per attribute.
struct Partitioning {
  std::vector<int> x;
  std::vector<SiteSet> y;

  // Everything (all transactions, every attribute) on site 0.
  static Partitioning single_site(const Instance& instance);

  bool operator==(const Partitioning&) const = default;
};

struct CostBreakdown {
  double read_access = 0;   // A_R
  double write_access = 0;  // A_W
  double transfer = 0;      // B
  // read_access + write_access + p * transfer (+ latency when configured).
  double objective = 0;
  std::vector<double> site_loads;
  double max_load = 0;
  // lambda * objective + (1 - lambda) * max_load
  double score = 0;
  std::optional<double> latency;
};

class FeasibilityError : public std::runtime_error {
 public:
  explicit FeasibilityError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Empty iff every transaction sits on exactly one valid site, every
// attribute has at least one replica and every attribute read by a
// transaction is present on that transaction's site.
std::vector<Violation> check_feasible(const Instance& instance,
                                      const DerivedCoefficients& derived,
                                      const Partitioning& partitioning);

// Full cost breakdown computed from the definitional sums over queries.
// Throws FeasibilityError for infeasible partitionings.
CostBreakdown evaluate(const Instance& instance,
                       const DerivedCoefficients& derived,
                       const Partitioning& partitioning);

struct FoldedCost {
  double objective = 0;
  double max_load = 0;
  double score = 0;
};

// Same objective and score, computed from the c1..c4 coefficients instead of
// the per-query sums.
FoldedCost evaluate_folded(const Instance& instance,
                           const DerivedCoefficients& derived,
                           const Partitioning& partitioning);

struct ScoreDelta {
  double objective = 0;
  double max_load = 0;
  double score = 0;
};

// Change caused by adding `site` to y(attribute). Throws ContractViolation if
// the replica already exists.
ScoreDelta delta_add_replica(const Instance& instance,
                             const DerivedCoefficients& derived,
                             const Partitioning& partitioning, int attribute,
                             int site);

// Change caused by removing `site` from y(attribute). Throws
// ContractViolation unless the removal keeps the partitioning feasible.
ScoreDelta delta_remove_replica(const Instance& instance,
                                const DerivedCoefficients& derived,
                                const Partitioning& partitioning,
                                int attribute, int site);

// psi_q per query: 1 iff q is a write query with a replica of one of its
// written attributes away from its transaction's site.
std::vector<uint8_t> remote_write_flags(const Instance& instance,
                                        const DerivedCoefficients& derived,
                                        const Partitioning& partitioning);

}  // namespace vpart

#endif  // VPART_PARTITIONING_H_
