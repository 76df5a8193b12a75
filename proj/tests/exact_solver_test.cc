#include "vpart/exact_solver.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace vpart {
namespace {

using testing::close;
using testing::t1_instance;
using testing::t2_instance;
using testing::tiny_instance;

ExactConfig exact_gap_zero() {
  ExactConfig config;
  config.gap = 0;
  return config;
}

TEST(SolveExact, T1SplitsUnreadAttribute) {
  const Instance instance = t1_instance();
  const SolveReport report = solve_exact(instance, exact_gap_zero());
  ASSERT_EQ(report.status, SolveStatus::kOptimal);
  EXPECT_EQ(report.objective, 80);
  EXPECT_DOUBLE_EQ(report.score, 80);
  const Partitioning& part = *report.partitioning;
  EXPECT_TRUE(part.y[0].contains(part.x[0]));
  EXPECT_FALSE(part.y[1].contains(part.x[0]));
}

TEST(SolveExact, T2KeepsSingleReplica) {
  const Instance instance = t2_instance();
  const SolveReport report = solve_exact(instance, exact_gap_zero());
  ASSERT_EQ(report.status, SolveStatus::kOptimal);
  EXPECT_EQ(report.objective, 4);
  const Partitioning& part = *report.partitioning;
  EXPECT_EQ(part.y[0], SiteSet{part.x[0]});
}

TEST(SolveExact, SingleSiteMatchesEvaluate) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Instance instance = tiny_instance(seed);
    instance.site_count = 1;
    const SolveReport report = solve_exact(instance);
    const CostBreakdown cost = evaluate(
        instance, derive(instance), Partitioning::single_site(instance));
    EXPECT_EQ(report.status, SolveStatus::kOptimal);
    EXPECT_EQ(report.objective, cost.objective);
    EXPECT_EQ(*report.partitioning, Partitioning::single_site(instance));
  }
}

TEST(SolveExact, RandomSeed42MatchesBruteForce) {
  GenParams params;
  params.seed = 42;
  params.transaction_count = 2;
  params.table_count = 1;
  params.max_attributes_per_table = 3;
  params.update_percent = 50;
  params.site_count = 2;
  Instance instance = generate(params);
  // Pad the table to exactly three attributes.
  while (instance.attribute_count() < 3) {
    Attribute extra;
    extra.id = instance.attribute_count();
    extra.table_id = 0;
    extra.name = "pad" + std::to_string(extra.id);
    extra.width = 4;
    instance.tables[0].attribute_ids.push_back(extra.id);
    instance.attributes.push_back(extra);
  }
  ASSERT_EQ(instance.attribute_count(), 3);
  const SolveReport report = solve_exact(instance, exact_gap_zero());
  const BruteForceResult oracle = brute_force(instance);
  EXPECT_EQ(report.score, oracle.score);
  EXPECT_EQ(report.objective, oracle.objective);
}

TEST(SolveExact, TimeLimitWithoutIncumbent) {
  // A warm start that violates the options is ignored, and a zero budget
  // leaves no time to find anything else.
  const Instance instance = t1_instance();
  ExactConfig config;
  config.time_limit_seconds = 0;
  config.warm_start = Partitioning{{0}, {{1}, {1}}};
  const SolveReport report = solve_exact(instance, config);
  EXPECT_EQ(report.status, SolveStatus::kNoSolutionTimeLimit);
  EXPECT_FALSE(report.partitioning);
}

TEST(SolveExact, TimeLimitKeepsWarmStart) {
  const Instance instance = t1_instance();
  ExactConfig config;
  config.time_limit_seconds = 0;
  config.warm_start = Partitioning::single_site(instance);
  const SolveReport report = solve_exact(instance, config);
  EXPECT_EQ(report.status, SolveStatus::kFeasibleTimeLimit);
  EXPECT_EQ(report.objective, 240);
}

TEST(SolveExact, HonorsRequiredReplicasAndDisjoint) {
  for (uint64_t seed = 0; seed < 15; ++seed) {
    const Instance instance = tiny_instance(seed);
    ExactConfig exact = exact_gap_zero();
    BruteForceConfig brute;
    exact.required_replicas = brute.required_replicas = {
        {0, instance.site_count - 1}};
    EXPECT_TRUE(close(solve_exact(instance, exact).score,
                      brute_force(instance, brute).score))
        << "seed " << seed;

    ExactConfig exact_disjoint = exact_gap_zero();
    exact_disjoint.disjoint = true;
    BruteForceConfig brute_disjoint;
    brute_disjoint.disjoint = true;
    const SolveReport report = solve_exact(instance, exact_disjoint);
    EXPECT_TRUE(close(report.score,
                      brute_force(instance, brute_disjoint).score))
        << "seed " << seed;
    for (const SiteSet& sites : report.partitioning->y) {
      EXPECT_EQ(sites.size(), 1);
    }
  }
}

TEST(SolveExact, GapToleranceIsRespected) {
  for (uint64_t seed = 0; seed < 15; ++seed) {
    const Instance instance = tiny_instance(seed);
    ExactConfig config;
    config.gap = 0.05;
    const SolveReport report = solve_exact(instance, config);
    ASSERT_EQ(report.status, SolveStatus::kOptimal);
    ASSERT_TRUE(report.gap);
    EXPECT_LE(*report.gap, 0.05 + 1e-12);
    const double best = brute_force(instance).score;
    EXPECT_LE(report.score, best + 0.05 * std::abs(report.score) + 1e-9);
  }
}

TEST(BruteForce, T1Optimum) {
  const BruteForceResult result = brute_force(t1_instance());
  EXPECT_EQ(result.objective, 80);
  // Only layouts keeping a1 with the transaction are enumerated.
  EXPECT_EQ(result.enumerated, 2 * 2 * 3);
}

TEST(BruteForce, LexicographicTieBreak) {
  InstanceBuilder b;
  b.sites(3);
  b.add_table("T", {{"a", 4}});
  const int t = b.add_transaction("t");
  b.add_query(t, "q", QueryKind::kRead, 1, {{"T", 1}}, {"T.a"});
  const BruteForceResult result = brute_force(b.build());
  EXPECT_EQ(result.partitioning.x, std::vector<int>{0});
  EXPECT_EQ(result.partitioning.y, std::vector<SiteSet>{SiteSet{0}});
}

TEST(BruteForce, RefusesOversizedInstances) {
  BruteForceConfig config;
  config.budget = 10;
  EXPECT_EQ(layout_count(t1_instance()), 18);
  EXPECT_THROW(brute_force(t1_instance(), config), SizeError);
}

TEST(BruteForce, InfeasibleOptionsThrow) {
  // The read attribute must sit with the transaction on site 0 and the
  // required replica puts it on site 1 as well.
  BruteForceConfig config;
  config.disjoint = true;
  config.required_replicas = {{0, 0}, {0, 1}};
  EXPECT_THROW(brute_force(t1_instance(), config), std::runtime_error);
  ExactConfig exact;
  exact.disjoint = true;
  exact.required_replicas = {{0, 0}, {0, 1}};
  EXPECT_THROW(solve_exact(t1_instance(), exact), std::runtime_error);
}

class OracleProperty : public ::testing::TestWithParam<uint64_t> {};

TEST_P(OracleProperty, ExactMatchesEnumeration) {
  Instance instance = tiny_instance(GetParam());
  if (GetParam() % 5 == 0) instance.p_latency = 6;
  const SolveReport report = solve_exact(instance, exact_gap_zero());
  const BruteForceResult oracle = brute_force(instance);
  ASSERT_EQ(report.status, SolveStatus::kOptimal);
  EXPECT_TRUE(close(report.score, oracle.score))
      << report.score << " vs " << oracle.score;
  EXPECT_TRUE(
      check_feasible(instance, derive(instance), *report.partitioning).empty());
}

// Extra sites can stay empty, so a larger site count never hurts.
TEST_P(OracleProperty, MoreSitesNeverHurt) {
  for (double lambda : {0.0, 1.0}) {
    Instance instance = tiny_instance(GetParam(), {4, 6, 2, 2e6});
    instance.lambda = lambda;
    instance.site_count = 1;
    double previous = brute_force(instance).score;
    for (int sites = 2; sites <= 3; ++sites) {
      instance.site_count = sites;
      if (layout_count(instance) > 5e6) break;
      const double score = brute_force(instance).score;
      EXPECT_LE(score, previous + 1e-9 * std::max(1.0, previous));
      previous = score;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleProperty,
                         ::testing::Range<uint64_t>(100, 130));

}  // namespace
}  // namespace vpart
