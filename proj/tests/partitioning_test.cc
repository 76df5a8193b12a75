#include "vpart/partitioning.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"

namespace vpart {
namespace {

using testing::close;
using testing::random_feasible;
using testing::t1_instance;
using testing::t2_instance;
using testing::tiny_instance;

TEST(CheckFeasible, SplitAwayUnreadAttribute) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  EXPECT_TRUE(check_feasible(instance, d, {{0}, {{0}, {1}}}).empty());
}

TEST(CheckFeasible, ReadAttributeAwayFromTransaction) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  const auto violations = check_feasible(instance, d, {{0}, {{1}, {1}}});
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].code, "single_sitedness");
}

TEST(CheckFeasible, EmptySiteSet) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  const auto violations = check_feasible(instance, d, {{0}, {{0}, {}}});
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].code, "coverage");
}

TEST(CheckFeasible, SiteOutOfRange) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  EXPECT_FALSE(check_feasible(instance, d, {{2}, {{2}, {0}}}).empty());
  EXPECT_FALSE(check_feasible(instance, d, {{0}, {{0}}}).empty());
}

TEST(Evaluate, SingleSite) {
  const Instance instance = t1_instance(1);
  const DerivedCoefficients d = derive(instance);
  const CostBreakdown cost =
      evaluate(instance, d, Partitioning::single_site(instance));
  EXPECT_EQ(cost.read_access, 240);
  EXPECT_EQ(cost.write_access, 0);
  EXPECT_EQ(cost.transfer, 0);
  EXPECT_EQ(cost.objective, 240);
  EXPECT_EQ(cost.max_load, 240);
  EXPECT_EQ(evaluate_folded(instance, d, Partitioning::single_site(instance))
                .objective,
            240);
}

TEST(Evaluate, UnreadAttributeMovedAway) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  const CostBreakdown cost = evaluate(instance, d, {{0}, {{0}, {1}}});
  EXPECT_EQ(cost.read_access, 80);
  EXPECT_EQ(cost.transfer, 0);
  EXPECT_EQ(cost.objective, 80);
  EXPECT_EQ(cost.site_loads, (std::vector<double>{80, 0}));
  EXPECT_EQ(cost.max_load, 80);
  EXPECT_DOUBLE_EQ(cost.score, 80);
}

TEST(Evaluate, ReplicatedWrite) {
  const Instance instance = t2_instance();
  const DerivedCoefficients d = derive(instance);
  const Partitioning both{{0}, {{0, 1}}};
  const CostBreakdown cost = evaluate(instance, d, both);
  EXPECT_EQ(cost.write_access, 8);
  EXPECT_EQ(cost.transfer, 4);
  EXPECT_EQ(cost.objective, 40);
  EXPECT_EQ(evaluate_folded(instance, d, both).objective, 40);
  EXPECT_EQ(evaluate(instance, d, {{0}, {{0}}}).objective, 4);
}

TEST(Evaluate, InfeasibleThrows) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  EXPECT_THROW(evaluate(instance, d, {{0}, {{1}, {1}}}), FeasibilityError);
  EXPECT_THROW(evaluate_folded(instance, d, {{0}, {{1}, {1}}}),
               FeasibilityError);
}

TEST(Evaluate, LatencyCountsRemoteWrites) {
  Instance instance = t2_instance();
  instance.p_latency = 100;
  const DerivedCoefficients d = derive(instance);
  const CostBreakdown local = evaluate(instance, d, {{0}, {{0}}});
  ASSERT_TRUE(local.latency.has_value());
  EXPECT_EQ(*local.latency, 0);
  EXPECT_EQ(local.objective, 4);
  const CostBreakdown remote = evaluate(instance, d, {{0}, {{0, 1}}});
  EXPECT_EQ(*remote.latency, 100);
  EXPECT_EQ(remote.objective, 140);
  EXPECT_EQ(remote_write_flags(instance, d, {{0}, {{0, 1}}}),
            std::vector<uint8_t>{1});
}

TEST(Delta, AddReplicaOfWrittenAttribute) {
  const Instance instance = t2_instance();
  const DerivedCoefficients d = derive(instance);
  const ScoreDelta delta = delta_add_replica(instance, d, {{0}, {{0}}}, 0, 1);
  EXPECT_EQ(delta.objective, 36);
  EXPECT_THROW(delta_add_replica(instance, d, {{0}, {{0}}}, 0, 0),
               ContractViolation);
}

TEST(Delta, ReadOnlyReplicaIsFree) {
  const Instance instance = t1_instance(3);
  const DerivedCoefficients d = derive(instance);
  const Partitioning part{{0}, {{0}, {1}}};
  EXPECT_EQ(delta_add_replica(instance, d, part, 1, 2).objective, 0);
  EXPECT_EQ(delta_add_replica(instance, d, part, 0, 1).objective, 0);
}

TEST(Delta, RemovingRequiredReplicaIsRejected) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  EXPECT_THROW(delta_remove_replica(instance, d, {{0}, {{0}, {1}}}, 0, 0),
               ContractViolation);
  EXPECT_THROW(delta_remove_replica(instance, d, {{0}, {{0}, {1}}}, 1, 1),
               ContractViolation);
}

class CostProperty : public ::testing::TestWithParam<uint64_t> {};

TEST_P(CostProperty, FoldedFormAgrees) {
  const uint64_t seed = GetParam();
  Instance instance = tiny_instance(seed);
  const bool fractional = seed % 2 == 1;
  if (fractional) testing::fractional_frequencies(instance, seed);
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 10; ++i) {
    const Partitioning part = random_feasible(instance, d, rng);
    const CostBreakdown cost = evaluate(instance, d, part);
    const FoldedCost folded = evaluate_folded(instance, d, part);
    if (fractional) {
      EXPECT_TRUE(close(cost.objective, folded.objective));
      EXPECT_TRUE(close(cost.score, folded.score));
    } else {
      EXPECT_EQ(cost.objective, folded.objective);
      EXPECT_EQ(cost.max_load, folded.max_load);
    }
  }
}

TEST_P(CostProperty, BreakdownIdentities) {
  const uint64_t seed = GetParam();
  const Instance instance = tiny_instance(seed);
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 10; ++i) {
    const Partitioning part = random_feasible(instance, d, rng);
    const CostBreakdown cost = evaluate(instance, d, part);
    EXPECT_DOUBLE_EQ(cost.objective, cost.read_access + cost.write_access +
                                         instance.p * cost.transfer);
    EXPECT_EQ(cost.max_load,
              *std::max_element(cost.site_loads.begin(),
                                cost.site_loads.end()));
    EXPECT_DOUBLE_EQ(cost.score, instance.lambda * cost.objective +
                                     (1 - instance.lambda) * cost.max_load);
    EXPECT_GE(cost.read_access, 0);
    EXPECT_GE(cost.write_access, 0);
    EXPECT_GE(cost.transfer, 0);

    Instance local = instance;
    local.p = 0;
    const CostBreakdown free_network = evaluate(local, d, part);
    EXPECT_EQ(free_network.objective,
              free_network.read_access + free_network.write_access);
  }
}

TEST_P(CostProperty, SingleSiteHasNoTransferOrLatency) {
  Instance instance = tiny_instance(GetParam());
  instance.site_count = 1;
  instance.p_latency = 5;
  const DerivedCoefficients d = derive(instance);
  const CostBreakdown cost =
      evaluate(instance, d, Partitioning::single_site(instance));
  EXPECT_EQ(cost.transfer, 0);
  EXPECT_EQ(*cost.latency, 0);
}

TEST_P(CostProperty, ScalesWithFrequency) {
  const uint64_t seed = GetParam();
  const Instance instance = tiny_instance(seed);
  Instance scaled = instance;
  for (Query& q : scaled.queries) q.frequency *= 4;
  const DerivedCoefficients d = derive(instance);
  const DerivedCoefficients ds = derive(scaled);
  std::mt19937_64 rng(seed);
  const Partitioning part = random_feasible(instance, d, rng);
  const CostBreakdown a = evaluate(instance, d, part);
  const CostBreakdown b = evaluate(scaled, ds, part);
  EXPECT_EQ(b.read_access, 4 * a.read_access);
  EXPECT_EQ(b.write_access, 4 * a.write_access);
  EXPECT_EQ(b.transfer, 4 * a.transfer);
  EXPECT_EQ(b.objective, 4 * a.objective);
  EXPECT_EQ(b.max_load, 4 * a.max_load);
  EXPECT_TRUE(close(b.score, 4 * a.score));
}

TEST_P(CostProperty, DeltasMatchReevaluation) {
  const uint64_t seed = GetParam();
  Instance instance = tiny_instance(seed);
  if (seed % 3 == 0) instance.p_latency = 7;
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 10; ++i) {
    const Partitioning part = random_feasible(instance, d, rng);
    const CostBreakdown before = evaluate(instance, d, part);
    for (int a = 0; a < instance.attribute_count(); ++a) {
      for (int s = 0; s < instance.site_count; ++s) {
        Partitioning after = part;
        if (part.y[a].contains(s)) {
          after.y[a].erase(s);
          if (!check_feasible(instance, d, after).empty()) continue;
          const ScoreDelta delta = delta_remove_replica(instance, d, part, a, s);
          const CostBreakdown cost = evaluate(instance, d, after);
          EXPECT_TRUE(close(delta.objective, cost.objective - before.objective));
          EXPECT_TRUE(close(delta.score, cost.score - before.score));
          if (!instance.p_latency) EXPECT_LE(cost.objective, before.objective);
        } else {
          after.y[a].insert(s);
          const ScoreDelta delta = delta_add_replica(instance, d, part, a, s);
          const CostBreakdown cost = evaluate(instance, d, after);
          EXPECT_TRUE(close(delta.objective, cost.objective - before.objective));
          EXPECT_TRUE(close(delta.max_load, cost.max_load - before.max_load));
          EXPECT_TRUE(close(delta.score, cost.score - before.score));
          EXPECT_GE(cost.write_access, before.write_access);
        }
      }
    }
  }
}

TEST_P(CostProperty, RemoteWriteFlagsMatchDefinition) {
  const uint64_t seed = GetParam();
  const Instance instance = tiny_instance(seed);
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(seed);
  const Partitioning part = random_feasible(instance, d, rng);
  const auto flags = remote_write_flags(instance, d, part);
  for (int q = 0; q < instance.query_count(); ++q) {
    int remote = 0;
    if (d.delta[q]) {
      const int home = part.x[d.transaction_of[q]];
      for (int a : instance.queries[q].accessed_attributes) {
        remote += part.y[a].size() - (part.y[a].contains(home) ? 1 : 0);
      }
    }
    EXPECT_EQ(flags[q], remote > 0 ? 1 : 0);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CostProperty, ::testing::Range<uint64_t>(0, 30));

}  // namespace
}  // namespace vpart
