// The linearized mixed-integer program: products x_{t,s} y_{a,s} are
// replaced by u_{t,a,s} with u <= x, u <= y, u >= x + y - 1.

#ifndef VPART_MIP_H_
#define VPART_MIP_H_

#include <string>
#include <string_view>
#include <vector>

#include "vpart/instance.h"
#include "vpart/lp.h"
#include "vpart/partitioning.h"
#include "vpart/solve_report.h"

namespace vpart {

enum class VarKind { kBinary, kContinuous };

struct MipVariable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  double cost = 0;
  double lower = 0;
  double upper = kInfinity;
  // Branching class: 0 for x, 1 for y, 2 for psi; -1 never branched.
  int branch_priority = -1;
};

struct MipConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0;
};

struct MipOptions {
  // x_{t,s} <= sum_{t' < t} x_{t',s-1}: sites are used in order.
  bool symmetry_breaking = false;
  // Drops rows and u variables that cannot bind; only the integral optimum
  // is preserved, not the exact row layout.
  bool compact = false;
  // Each attribute on exactly one site.
  bool disjoint = false;
  ReplicaList required_replicas;
};

struct MipModel {
  std::vector<MipVariable> variables;
  std::vector<MipConstraint> constraints;
  int transactions = 0;
  int attributes = 0;
  int sites = 0;
  std::vector<int> x_index;    // t * S + s
  std::vector<int> y_index;    // a * S + s
  std::vector<int> u_index;    // (t * A + a) * S + s; -1 when dropped
  std::vector<int> psi_index;  // per query; -1 without latency
  int m_index = -1;

  int x_var(int t, int s) const { return x_index[t * sites + s]; }
  int y_var(int a, int s) const { return y_index[a * sites + s]; }
  int u_var(int t, int a, int s) const {
    return u_index[(static_cast<std::size_t>(t) * attributes + a) * sites +
                   s];
  }
};

MipModel build_mip(const Instance& instance, const DerivedCoefficients& derived,
                   const MipOptions& options = {});

// The MIP point of a partitioning: u = x y, m = max load, psi = remote-write
// flags.
std::vector<double> lift(const MipModel& model, const Instance& instance,
                         const DerivedCoefficients& derived,
                         const Partitioning& partitioning);

// Rounds x (largest value per transaction) and y (values above 0.5).
Partitioning decode(const MipModel& model, const std::vector<double>& point);

// Names of the constraints and bounds violated by `point` beyond `tolerance`
// (scaled by the magnitude of each row).
std::vector<std::string> violated_constraints(const MipModel& model,
                                              const std::vector<double>& point,
                                              double tolerance = 1e-9);

double objective_value(const MipModel& model, const std::vector<double>& point);

// Continuous relaxation. u gets an explicit upper bound of 1, implied by
// u <= x in the full model.
LpProblem relaxation(const MipModel& model);

// Optimal value of the root relaxation.
double root_relaxation_value(const MipModel& model);

enum class ExportFormat { kFreeMps, kLp };

// Throws std::invalid_argument for names other than "mps" and "lp".
ExportFormat parse_export_format(std::string_view name);

std::string export_model(const MipModel& model, ExportFormat format);

}  // namespace vpart

#endif  // VPART_MIP_H_
