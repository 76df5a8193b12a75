#include "vpart/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vpart {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kDropTolerance = 1e-13;
constexpr double kPrimalTolerance = 1e-9;
constexpr int kRecomputeInterval = 64;
constexpr int kMaxRepairs = 64;

double primal_tolerance(double bound) {
  return kPrimalTolerance * std::max(1.0, std::abs(bound));
}

}  // namespace

int LpProblem::add_column(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_cols() - 1;
}

DualSimplex::DualSimplex(const LpProblem& problem)
    : rows_(problem.num_rows()),
      structural_(problem.num_cols()),
      total_(problem.num_cols() + problem.num_rows()),
      width_(problem.num_cols() + problem.num_rows() + 1) {
  tableau_.assign(static_cast<std::size_t>(rows_) * width_, 0.0);
  cost_.assign(total_, 0.0);
  lower_.assign(total_, 0.0);
  upper_.assign(total_, 0.0);
  value_.assign(total_, 0.0);
  position_.assign(total_, Position::kAtLower);
  basis_.resize(rows_);

  for (int j = 0; j < structural_; ++j) {
    cost_[j] = problem.cost[j];
    lower_[j] = problem.lower[j];
    upper_[j] = problem.upper[j];
    cost_scale_ = std::max(cost_scale_, std::abs(cost_[j]));
  }
  for (int i = 0; i < rows_; ++i) {
    const LpRow& row = problem.rows[i];
    double scale = 0;
    for (const LinearTerm& term : row.terms) {
      tab(i, term.var) += term.coef;
    }
    for (int j = 0; j < structural_; ++j) {
      scale = std::max(scale, std::abs(tab(i, j)));
    }
    if (scale == 0) scale = 1;
    // Rows are scaled to unit max coefficient; slack bounds are 0 or
    // infinite, so scaling leaves their meaning intact.
    for (int j = 0; j < structural_; ++j) tab(i, j) /= scale;
    tab(i, total_) = row.rhs / scale;
    const int slack = structural_ + i;
    tab(i, slack) = 1.0;
    switch (row.relation) {
      case Relation::kLessEqual:
        lower_[slack] = 0;
        upper_[slack] = kInfinity;
        break;
      case Relation::kGreaterEqual:
        lower_[slack] = -kInfinity;
        upper_[slack] = 0;
        break;
      case Relation::kEqual:
        lower_[slack] = 0;
        upper_[slack] = 0;
        break;
    }
    basis_[i] = slack;
    position_[slack] = Position::kBasic;
  }
  reduced_ = cost_;
  for (int j = 0; j < structural_; ++j) {
    const bool lower_ok = std::isfinite(lower_[j]);
    const bool upper_ok = std::isfinite(upper_[j]);
    if ((cost_[j] > 0 && !lower_ok) || (cost_[j] < 0 && !upper_ok) ||
        (!lower_ok && !upper_ok)) {
      throw std::invalid_argument(
          "column without a finite bound on its cost side");
    }
    position_[j] = cost_[j] < 0 ? Position::kAtUpper : Position::kAtLower;
  }
}

void DualSimplex::set_bounds(int col, double lo, double hi) {
  lower_[col] = lo;
  upper_[col] = hi;
  dirty_ = true;
}

void DualSimplex::place_nonbasic(int j) {
  if (position_[j] == Position::kBasic) return;
  const double lo = lower_[j];
  const double hi = upper_[j];
  const bool lower_ok = std::isfinite(lo);
  const bool upper_ok = std::isfinite(hi);
  const double tol = 1e-9 * cost_scale_;
  Position pos = position_[j];
  if (lo == hi) {
    pos = Position::kAtLower;
  } else if (reduced_[j] > tol && lower_ok) {
    pos = Position::kAtLower;
  } else if (reduced_[j] < -tol && upper_ok) {
    pos = Position::kAtUpper;
  } else if (pos == Position::kAtLower && !lower_ok) {
    pos = Position::kAtUpper;
  } else if (pos == Position::kAtUpper && !upper_ok) {
    pos = Position::kAtLower;
  }
  position_[j] = pos;
  value_[j] = pos == Position::kAtLower ? lo : hi;
}

void DualSimplex::recompute_basic_values() {
  scratch_.clear();
  for (int j = 0; j < total_; ++j) {
    if (position_[j] != Position::kBasic && value_[j] != 0) {
      scratch_.push_back(j);
    }
  }
  for (int i = 0; i < rows_; ++i) {
    const double* row = &tableau_[static_cast<std::size_t>(i) * width_];
    double v = row[total_];
    for (int j : scratch_) v -= row[j] * value_[j];
    value_[basis_[i]] = v;
  }
}

int DualSimplex::choose_leaving_row() const {
  int best = -1;
  double worst = 0;
  for (int i = 0; i < rows_; ++i) {
    const int j = basis_[i];
    const double v = value_[j];
    double violation = 0;
    if (v < lower_[j] - primal_tolerance(lower_[j])) {
      violation = lower_[j] - v;
    } else if (v > upper_[j] + primal_tolerance(upper_[j])) {
      violation = v - upper_[j];
    }
    if (violation > worst) {
      worst = violation;
      best = i;
    }
  }
  return best;
}

int DualSimplex::choose_entering(int r, bool increase) const {
  const double* row = &tableau_[static_cast<std::size_t>(r) * width_];
  const double dual_tol = 1e-9 * cost_scale_;
  auto eligible = [&](int j) {
    if (position_[j] == Position::kBasic || lower_[j] == upper_[j]) {
      return false;
    }
    const double alpha = row[j];
    const bool at_lower = position_[j] == Position::kAtLower;
    if (increase) {
      return at_lower ? alpha < -kPivotTolerance : alpha > kPivotTolerance;
    }
    return at_lower ? alpha > kPivotTolerance : alpha < -kPivotTolerance;
  };
  // Harris two-pass ratio test.
  double bound = kInfinity;
  for (int j = 0; j < total_; ++j) {
    if (row[j] == 0 || !eligible(j)) continue;
    bound = std::min(bound, (std::abs(reduced_[j]) + dual_tol) /
                                std::abs(row[j]));
  }
  if (!std::isfinite(bound)) return -1;
  int best = -1;
  double best_alpha = 0;
  for (int j = 0; j < total_; ++j) {
    if (row[j] == 0 || !eligible(j)) continue;
    const double alpha = std::abs(row[j]);
    if (std::abs(reduced_[j]) / alpha <= bound && alpha > best_alpha) {
      best_alpha = alpha;
      best = j;
    }
  }
  return best;
}

void DualSimplex::pivot(int r, int q, double target) {
  const int leave = basis_[r];
  const double alpha = tab(r, q);
  const double step = (value_[leave] - target) / alpha;
  for (int i = 0; i < rows_; ++i) {
    const double f = tab(i, q);
    if (f != 0) value_[basis_[i]] -= f * step;
  }
  value_[q] += step;
  value_[leave] = target;
  position_[leave] = (target == lower_[leave]) ? Position::kAtLower
                                               : Position::kAtUpper;

  const double entering_reduced = reduced_[q];
  double* pivot_row = &tableau_[static_cast<std::size_t>(r) * width_];
  const double inverse = 1.0 / alpha;
  scratch_.clear();
  for (int j = 0; j < width_; ++j) {
    if (pivot_row[j] == 0) continue;
    pivot_row[j] *= inverse;
    if (std::abs(pivot_row[j]) < kDropTolerance) {
      pivot_row[j] = 0;
    } else {
      scratch_.push_back(j);
    }
  }
  pivot_row[q] = 1.0;
  for (int i = 0; i < rows_; ++i) {
    if (i == r) continue;
    double* row = &tableau_[static_cast<std::size_t>(i) * width_];
    const double f = row[q];
    if (f == 0) continue;
    for (int j : scratch_) {
      double v = row[j] - f * pivot_row[j];
      if (std::abs(v) < kDropTolerance) v = 0;
      row[j] = v;
    }
    row[q] = 0;
  }
  for (int j : scratch_) {
    if (j < total_) reduced_[j] -= entering_reduced * pivot_row[j];
  }
  reduced_[q] = 0;
  basis_[r] = q;
  position_[q] = Position::kBasic;
}

bool DualSimplex::repair_dual_infeasibility() {
  const double tol = 1e-9 * cost_scale_;
  bool flipped = false;
  for (int j = 0; j < total_; ++j) {
    if (position_[j] == Position::kBasic || lower_[j] == upper_[j]) continue;
    if (position_[j] == Position::kAtLower && reduced_[j] < -tol &&
        std::isfinite(upper_[j])) {
      position_[j] = Position::kAtUpper;
      value_[j] = upper_[j];
      flipped = true;
    } else if (position_[j] == Position::kAtUpper && reduced_[j] > tol &&
               std::isfinite(lower_[j])) {
      position_[j] = Position::kAtLower;
      value_[j] = lower_[j];
      flipped = true;
    }
  }
  if (flipped) recompute_basic_values();
  return flipped;
}

LpStatus DualSimplex::solve(int64_t max_iterations) {
  if (dirty_) {
    for (int j = 0; j < total_; ++j) place_nonbasic(j);
    recompute_basic_values();
    dirty_ = false;
  }
  int repairs = 0;
  for (int64_t it = 0; it < max_iterations; ++it) {
    const int r = choose_leaving_row();
    if (r < 0) {
      if (repairs < kMaxRepairs && repair_dual_infeasibility()) {
        ++repairs;
        continue;
      }
      return LpStatus::kOptimal;
    }
    const int leave = basis_[r];
    const bool increase = value_[leave] < lower_[leave];
    const double target = increase ? lower_[leave] : upper_[leave];
    const int q = choose_entering(r, increase);
    if (q < 0) return LpStatus::kInfeasible;
    pivot(r, q, target);
    ++iterations_;
    if (iterations_ % kRecomputeInterval == 0) recompute_basic_values();
  }
  return LpStatus::kIterationLimit;
}

double DualSimplex::objective() const {
  double sum = 0;
  for (int j = 0; j < structural_; ++j) sum += cost_[j] * value_[j];
  return sum;
}

std::vector<double> DualSimplex::primal() const {
  return std::vector<double>(value_.begin(), value_.begin() + structural_);
}

}  // namespace vpart
