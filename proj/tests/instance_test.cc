#include "vpart/instance.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"

namespace vpart {
namespace {

using testing::t1_instance;
using testing::t2_instance;
using testing::tiny_instance;

Instance two_tables() {
  InstanceBuilder b;
  b.add_table("A", {{"x", 4}, {"y", 8}});
  b.add_table("B", {{"z", 2}});
  const int t = b.add_transaction("t");
  b.add_query(t, "r", QueryKind::kRead, 1, {{"A", 1}, {"B", 3}},
              {"A.x", "B.z"});
  return b.build_unchecked();
}

std::vector<std::string> codes(const std::vector<Violation>& violations) {
  std::vector<std::string> out;
  for (const Violation& v : violations) out.push_back(v.code);
  return out;
}

TEST(Validate, WellFormedInstanceHasNoViolations) {
  EXPECT_TRUE(validate(two_tables()).empty());
}

TEST(Validate, UnknownAttributeId) {
  InstanceBuilder b;
  b.add_table("A", {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}});
  const int t = b.add_transaction("t");
  b.add_query(t, "q", QueryKind::kRead, 1, {{"A", 1}}, {"A.a"});
  Instance instance = b.build_unchecked();
  instance.queries[0].accessed_attributes = {99};
  EXPECT_EQ(codes(validate(instance)),
            std::vector<std::string>{"unknown_attribute"});
}

TEST(Validate, ZeroWidth) {
  Instance instance = two_tables();
  instance.attributes[1].width = 0;
  const auto violations = validate(instance);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].code, "width");
  EXPECT_NE(violations[0].message.find("width must be >=1"),
            std::string::npos);
}

TEST(Validate, StructuralErrors) {
  Instance instance = two_tables();
  instance.site_count = 0;
  instance.lambda = 1.5;
  instance.p = -1;
  instance.queries[0].frequency = -2;
  const auto found = codes(validate(instance));
  for (const char* code : {"sites", "lambda", "penalty", "frequency"}) {
    EXPECT_NE(std::find(found.begin(), found.end(), code), found.end())
        << code;
  }
}

TEST(Validate, AttributeInTwoTables) {
  Instance instance = two_tables();
  instance.tables[1].attribute_ids.push_back(0);
  EXPECT_FALSE(validate(instance).empty());
}

TEST(Validate, AccessedTableNeedsRows) {
  Instance instance = two_tables();
  instance.queries[0].rows_per_table.erase(1);
  EXPECT_EQ(codes(validate(instance)),
            std::vector<std::string>{"missing_rows"});
}

TEST(Validate, BuilderRejectsInvalidInstance) {
  InstanceBuilder b;
  b.add_table("A", {{"a", 0}});
  const int t = b.add_transaction("t");
  b.add_query(t, "q", QueryKind::kRead, 1, {{"A", 1}}, {"A.a"});
  EXPECT_THROW(b.build(), ValidationError);
  EXPECT_THROW(derive(b.build_unchecked()), ValidationError);
}

TEST(Lint, WriteWithoutMatchingRead) {
  EXPECT_EQ(codes(lint(t2_instance())),
            std::vector<std::string>{"unpaired_write"});
  EXPECT_TRUE(lint(t1_instance()).empty());
}

TEST(Derive, WeightsAndFlags) {
  const Instance instance = t1_instance();
  const DerivedCoefficients d = derive(instance);
  EXPECT_EQ(d.w(0, 0), 80);
  EXPECT_EQ(d.w(1, 0), 160);
  EXPECT_EQ(d.alpha(0, 0), 1);
  EXPECT_EQ(d.alpha(1, 0), 0);
  EXPECT_EQ(d.beta(1, 0), 1);
  EXPECT_EQ(d.phi(0, 0), 1);
  EXPECT_EQ(d.phi(1, 0), 0);
}

TEST(Derive, ReadOnlyWorkloadHasNoWriteCoefficients) {
  const DerivedCoefficients d = derive(t1_instance());
  for (double c : d.c2) EXPECT_EQ(c, 0);
  for (double c : d.c4) EXPECT_EQ(c, 0);
}

TEST(Derive, WriteQueryCoefficients) {
  const DerivedCoefficients d = derive(t2_instance());
  EXPECT_EQ(d.c1(0, 0), -32);
  EXPECT_EQ(d.c2[0], 36);
  EXPECT_EQ(d.c3(0, 0), 0);
  EXPECT_EQ(d.c4[0], 4);
}

// c1..c4 recomputed straight from the flag matrices.
TEST(DeriveProperty, ClosedForms) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const Instance instance = tiny_instance(seed);
    const DerivedCoefficients d = derive(instance);
    const double p = instance.p;
    for (int a = 0; a < instance.attribute_count(); ++a) {
      double c2 = 0;
      double c4 = 0;
      for (int t = 0; t < instance.transaction_count(); ++t) {
        double c1 = 0;
        double c3 = 0;
        bool read = false;
        for (int q = 0; q < instance.query_count(); ++q) {
          if (!d.gamma(q, t)) continue;
          const double w = d.w(a, q);
          c1 += w * (d.beta(a, q) * (1 - d.delta[q]) -
                     p * d.alpha(a, q) * d.delta[q]);
          c3 += w * d.beta(a, q) * (1 - d.delta[q]);
          read = read || (d.alpha(a, q) && !d.delta[q]);
        }
        EXPECT_DOUBLE_EQ(d.c1(a, t), c1);
        EXPECT_DOUBLE_EQ(d.c3(a, t), c3);
        EXPECT_EQ(d.phi(a, t), read ? 1 : 0);
      }
      for (int q = 0; q < instance.query_count(); ++q) {
        EXPECT_TRUE(!d.alpha(a, q) || d.beta(a, q));
        const Query& query = instance.queries[q];
        const int table = instance.attributes[a].table_id;
        const auto rows = query.rows_per_table.find(table);
        const double n = rows == query.rows_per_table.end() ? 0 : rows->second;
        if (d.beta(a, q)) {
          EXPECT_DOUBLE_EQ(d.w(a, q), instance.attributes[a].width *
                                          query.frequency * n);
        }
        c2 += d.w(a, q) * d.delta[q] * (d.beta(a, q) + p * d.alpha(a, q));
        c4 += d.w(a, q) * d.beta(a, q) * d.delta[q];
      }
      EXPECT_DOUBLE_EQ(d.c2[a], c2);
      EXPECT_DOUBLE_EQ(d.c4[a], c4);
    }
  }
}

TEST(DeriveProperty, ReadAndLoadCoefficientsAgree) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const Instance instance = tiny_instance(seed);
    const DerivedCoefficients d = derive(instance);
    for (int a = 0; a < instance.attribute_count(); ++a) {
      for (int t = 0; t < instance.transaction_count(); ++t) {
        double remote = 0;
        for (int q = 0; q < instance.query_count(); ++q) {
          remote += d.w(a, q) * d.gamma(q, t) * d.alpha(a, q) * d.delta[q];
        }
        EXPECT_DOUBLE_EQ(d.c1(a, t) + instance.p * remote, d.c3(a, t));
      }
    }
  }
}

TEST(DeriveProperty, LinearInFrequency) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Instance instance = tiny_instance(seed);
    const DerivedCoefficients base = derive(instance);
    const double k = 3;
    for (Query& q : instance.queries) q.frequency *= k;
    const DerivedCoefficients scaled = derive(instance);
    for (int a = 0; a < instance.attribute_count(); ++a) {
      EXPECT_EQ(scaled.c2[a], k * base.c2[a]);
      EXPECT_EQ(scaled.c4[a], k * base.c4[a]);
      for (int t = 0; t < instance.transaction_count(); ++t) {
        EXPECT_EQ(scaled.c1(a, t), k * base.c1(a, t));
        EXPECT_EQ(scaled.c3(a, t), k * base.c3(a, t));
      }
      for (int q = 0; q < instance.query_count(); ++q) {
        EXPECT_EQ(scaled.w(a, q), k * base.w(a, q));
      }
    }
  }
}

TEST(DeriveProperty, ReadOnlyFoldsToLoadCoefficients) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Instance instance = tiny_instance(seed);
    for (Query& q : instance.queries) q.kind = QueryKind::kRead;
    const DerivedCoefficients d = derive(instance);
    for (int a = 0; a < instance.attribute_count(); ++a) {
      EXPECT_EQ(d.c2[a], 0);
      EXPECT_EQ(d.c4[a], 0);
      for (int t = 0; t < instance.transaction_count(); ++t) {
        EXPECT_EQ(d.c1(a, t), d.c3(a, t));
      }
    }
  }
}

TEST(Derive, UnaccessedAttributeHasZeroWeight) {
  InstanceBuilder b;
  b.add_table("A", {{"used", 4}});
  b.add_table("B", {{"idle", 4}});
  const int t = b.add_transaction("t");
  b.add_query(t, "q", QueryKind::kRead, 1, {{"A", 1}}, {"A.used"});
  const DerivedCoefficients d = derive(b.build());
  EXPECT_EQ(d.w(1, 0), 0);
  EXPECT_EQ(d.c3(1, 0), 0);
}

}  // namespace
}  // namespace vpart
