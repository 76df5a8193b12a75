// Dense bounded-variable dual simplex for the LP relaxations solved during
// branch-and-bound.
//
// The solver keeps a full tableau B^-1 [A | I | b]. Every structural column
// must have a finite bound on the side its cost points to (a finite lower
// bound when the cost is nonnegative, a finite upper bound when negative), so
// the all-slack basis is dual feasible and no phase one is needed. Bounds may
// be changed between solves; the solver restarts from the current basis,
// which stays dual feasible, and repairs primal feasibility.

#ifndef VPART_LP_H_
#define VPART_LP_H_

#include <cstdint>
#include <limits>
#include <vector>

namespace vpart {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearTerm {
  int var = 0;
  double coef = 0;
};

struct LpRow {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0;
};

// minimize cost . x  subject to rows and lower <= x <= upper.
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_column(double cost, double lower, double upper);
};

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

class DualSimplex {
 public:
  explicit DualSimplex(const LpProblem& problem);

  void set_bounds(int col, double lower, double upper);
  double lower(int col) const { return lower_[col]; }
  double upper(int col) const { return upper_[col]; }

  // On kOptimal the primal values are optimal. On kIterationLimit the basis
  // is still dual feasible, so objective() is a valid lower bound.
  LpStatus solve(int64_t max_iterations = 200000);

  double objective() const;
  // Structural values.
  std::vector<double> primal() const;
  int64_t iterations() const { return iterations_; }

 private:
  enum class Position : uint8_t { kBasic, kAtLower, kAtUpper };

  double& tab(int row, int col) {
    return tableau_[static_cast<std::size_t>(row) * width_ + col];
  }
  double tab(int row, int col) const {
    return tableau_[static_cast<std::size_t>(row) * width_ + col];
  }

  void place_nonbasic(int col);
  void recompute_basic_values();
  int choose_leaving_row() const;
  int choose_entering(int row, bool to_lower) const;
  void pivot(int row, int col, double target);
  bool repair_dual_infeasibility();

  int rows_ = 0;
  int structural_ = 0;
  int total_ = 0;  // structural + slack columns
  int width_ = 0;  // total + rhs column
  std::vector<double> tableau_;
  std::vector<double> cost_;
  std::vector<double> reduced_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> value_;
  std::vector<Position> position_;
  std::vector<int> basis_;  // column basic in each row
  std::vector<int> scratch_;
  double cost_scale_ = 1.0;
  int64_t iterations_ = 0;
  bool dirty_ = true;
};

}  // namespace vpart

#endif  // VPART_LP_H_
