#include "vpart/mip.h"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "test_util.h"
#include "vpart/exact_solver.h"
#include "vpart/lp.h"

namespace vpart {
namespace {

using testing::close;
using testing::random_feasible;
using testing::t1_instance;
using testing::tiny_instance;

TEST(DualSimplex, SmallProblem) {
  // min -x - 2y  s.t. x + y <= 4, x + 3y <= 6, 0 <= x, y <= 3
  LpProblem lp;
  const int x = lp.add_column(-1, 0, 3);
  const int y = lp.add_column(-2, 0, 3);
  lp.rows.push_back({{{x, 1}, {y, 1}}, Relation::kLessEqual, 4});
  lp.rows.push_back({{{x, 1}, {y, 3}}, Relation::kLessEqual, 6});
  DualSimplex simplex(lp);
  ASSERT_EQ(simplex.solve(), LpStatus::kOptimal);
  EXPECT_NEAR(simplex.objective(), -5, 1e-9);
  EXPECT_NEAR(simplex.primal()[x], 3, 1e-9);
  EXPECT_NEAR(simplex.primal()[y], 1, 1e-9);

  simplex.set_bounds(x, 0, 1);
  ASSERT_EQ(simplex.solve(), LpStatus::kOptimal);
  EXPECT_NEAR(simplex.objective(), -1 - 2 * 5.0 / 3, 1e-9);

  simplex.set_bounds(x, 5, 5);
  EXPECT_EQ(simplex.solve(), LpStatus::kInfeasible);
}

TEST(DualSimplex, EqualityAndGreaterRows) {
  // min x + y  s.t. x + y >= 2, x - y = 1, x, y >= 0
  LpProblem lp;
  const int x = lp.add_column(1, 0, kInfinity);
  const int y = lp.add_column(1, 0, kInfinity);
  lp.rows.push_back({{{x, 1}, {y, 1}}, Relation::kGreaterEqual, 2});
  lp.rows.push_back({{{x, 1}, {y, -1}}, Relation::kEqual, 1});
  DualSimplex simplex(lp);
  ASSERT_EQ(simplex.solve(), LpStatus::kOptimal);
  EXPECT_NEAR(simplex.objective(), 2, 1e-9);
  EXPECT_NEAR(simplex.primal()[x], 1.5, 1e-9);
}

TEST(DualSimplex, RejectsUnboundedCostDirection) {
  LpProblem lp;
  lp.add_column(-1, 0, kInfinity);
  EXPECT_THROW(DualSimplex{lp}, std::invalid_argument);
}

TEST(BuildMip, CountsForT1) {
  const Instance instance = t1_instance();
  const MipModel model = build_mip(instance, derive(instance));
  EXPECT_EQ(model.variables.size(), 11u);
  EXPECT_EQ(model.constraints.size(), 21u);
}

TEST(BuildMip, CountsMatchFormula) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Instance instance = tiny_instance(seed);
    const MipModel model = build_mip(instance, derive(instance));
    const std::size_t t = instance.transaction_count();
    const std::size_t a = instance.attribute_count();
    const std::size_t s = instance.site_count;
    EXPECT_EQ(model.variables.size(), t * s + a * s + t * a * s + 1);
    EXPECT_EQ(model.constraints.size(),
              t + a + a * t * s + s + 3 * t * a * s);
    for (int j : model.u_index) {
      EXPECT_EQ(model.variables[j].kind, VarKind::kContinuous);
    }
  }
}

TEST(BuildMip, VariableNames) {
  const Instance instance = t1_instance();
  const MipModel model = build_mip(instance, derive(instance));
  EXPECT_EQ(model.variables[model.x_var(0, 1)].name, "x_0_1");
  EXPECT_EQ(model.variables[model.y_var(1, 0)].name, "y_1_0");
  EXPECT_EQ(model.variables[model.u_var(0, 1, 1)].name, "u_0_1_1");
  EXPECT_EQ(model.variables[model.m_index].name, "m");
}

TEST(BuildMip, SingleSiteIsForced) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Instance instance = tiny_instance(seed);
    instance.site_count = 1;
    const DerivedCoefficients d = derive(instance);
    const MipModel model = build_mip(instance, d);
    const Partitioning single = Partitioning::single_site(instance);
    EXPECT_TRUE(close(root_relaxation_value(model),
                      evaluate(instance, d, single).score));
  }
}

class LinearizationProperty : public ::testing::TestWithParam<uint64_t> {};

TEST_P(LinearizationProperty, LiftedPointIsFeasibleAndExact) {
  const uint64_t seed = GetParam();
  Instance instance = tiny_instance(seed);
  if (seed % 4 == 0) instance.p_latency = 3;
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(seed);
  for (bool compact : {false, true}) {
    MipOptions options;
    options.compact = compact;
    const MipModel model = build_mip(instance, d, options);
    for (int i = 0; i < 5; ++i) {
      const Partitioning part = random_feasible(instance, d, rng);
      const std::vector<double> point = lift(model, instance, d, part);
      EXPECT_TRUE(violated_constraints(model, point).empty());
      const CostBreakdown cost = evaluate(instance, d, part);
      const FoldedCost folded = evaluate_folded(instance, d, part);
      EXPECT_TRUE(close(objective_value(model, point), cost.score));
      EXPECT_TRUE(close(objective_value(model, point), folded.score));
      EXPECT_EQ(decode(model, point), part);
    }
  }
}

TEST_P(LinearizationProperty, IntegralPointsHaveProductU) {
  const uint64_t seed = GetParam();
  const Instance instance = tiny_instance(seed);
  const DerivedCoefficients d = derive(instance);
  const MipModel model = build_mip(instance, d);
  std::mt19937_64 rng(seed);
  const Partitioning part = random_feasible(instance, d, rng);
  std::vector<double> point = lift(model, instance, d, part);
  // Any other u value at an integral (x, y) breaks a linearization row.
  for (int t = 0; t < instance.transaction_count(); ++t) {
    for (int a = 0; a < instance.attribute_count(); ++a) {
      for (int s = 0; s < instance.site_count; ++s) {
        const int j = model.u_var(t, a, s);
        const double saved = point[j];
        point[j] = 1 - saved;
        EXPECT_FALSE(violated_constraints(model, point).empty());
        point[j] = saved;
      }
    }
  }
}

TEST_P(LinearizationProperty, RootRelaxationIsABound) {
  const uint64_t seed = GetParam();
  const Instance instance = tiny_instance(seed);
  const DerivedCoefficients d = derive(instance);
  const double root = root_relaxation_value(build_mip(instance, d));
  const double best = brute_force(instance).score;
  EXPECT_LE(root, best + 1e-9 * std::max(1.0, std::abs(best)));
}

INSTANTIATE_TEST_SUITE_P(Seeds, LinearizationProperty,
                         ::testing::Range<uint64_t>(0, 25));

TEST(BuildMip, InfeasibleLiftIsReported) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  const MipModel model = build_mip(instance, d);
  std::vector<double> point = lift(model, instance, d, {{0}, {{0}, {1}}});
  point[model.y_var(0, 0)] = 0;
  point[model.y_var(0, 1)] = 1;
  const auto violated = violated_constraints(model, point);
  EXPECT_FALSE(violated.empty());
}

TEST(Export, MpsForT1) {
  const Instance instance = t1_instance();
  const MipModel model = build_mip(instance, derive(instance));
  const std::string mps = export_model(model, ExportFormat::kFreeMps);
  std::istringstream in(mps);
  std::string line;
  std::string section;
  int rows = 0;
  std::set<std::string> columns;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != ' ') {
      std::istringstream words(line);
      words >> section;
      continue;
    }
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (section == "ROWS") {
      std::string name;
      words >> name;
      if (first != "N") ++rows;
    } else if (section == "COLUMNS" && first != "MARKER") {
      std::string second;
      words >> second;
      if (second != "'MARKER'") columns.insert(first);
    }
  }
  EXPECT_EQ(rows, 21);
  EXPECT_EQ(columns.size(), 11u);
  EXPECT_EQ(mps, export_model(model, ExportFormat::kFreeMps));
  EXPECT_NE(mps.find("ENDATA"), std::string::npos);
}

TEST(Export, LpText) {
  const Instance instance = t1_instance();
  const MipModel model = build_mip(instance, derive(instance));
  const std::string lp = export_model(model, ExportFormat::kLp);
  for (const char* section : {"Minimize", "Subject To", "Bounds", "Binaries",
                              "End"}) {
    EXPECT_NE(lp.find(section), std::string::npos) << section;
  }
  EXPECT_EQ(lp, export_model(model, ExportFormat::kLp));
}

TEST(Export, FormatNames) {
  EXPECT_EQ(parse_export_format("mps"), ExportFormat::kFreeMps);
  EXPECT_EQ(parse_export_format("lp"), ExportFormat::kLp);
  EXPECT_THROW(parse_export_format("xlsx"), std::invalid_argument);
}

}  // namespace
}  // namespace vpart
