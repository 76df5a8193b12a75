#include "vpart/reduction.h"

#include <map>
#include <numeric>
#include <string>

namespace vpart {

GroupedInstance group_attributes(const Instance& instance,
                                 const DerivedCoefficients& d) {
  GroupedInstance out;
  AttributeGrouping& grouping = out.grouping;
  grouping.mapping.assign(instance.attribute_count(), -1);

  Instance& grouped = out.instance;
  grouped.site_count = instance.site_count;
  grouped.p = instance.p;
  grouped.lambda = instance.lambda;
  grouped.p_latency = instance.p_latency;

  for (const Table& table : instance.tables) {
    // Access signature: the queries that name the attribute explicitly.
    std::map<std::vector<int>, int> group_of_signature;
    Table new_table{table.id, table.name, {}};
    for (int a : table.attribute_ids) {
      std::vector<int> signature;
      for (int q = 0; q < instance.query_count(); ++q) {
        if (d.alpha(a, q)) signature.push_back(q);
      }
      auto [it, inserted] = group_of_signature.try_emplace(
          signature, static_cast<int>(grouping.groups.size()));
      if (inserted) {
        grouping.groups.emplace_back();
        grouping.group_width.push_back(0);
        new_table.attribute_ids.push_back(it->second);
      }
      grouping.groups[it->second].push_back(a);
      grouping.group_width[it->second] += instance.attributes[a].width;
      grouping.mapping[a] = it->second;
    }
    grouped.tables.push_back(std::move(new_table));
  }

  for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
    const auto& members = grouping.groups[g];
    Attribute attr;
    attr.id = static_cast<int>(g);
    attr.table_id = instance.attributes[members.front()].table_id;
    attr.width = grouping.group_width[g];
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) attr.name += "+";
      attr.name += instance.attributes[members[i]].name;
    }
    grouped.attributes.push_back(std::move(attr));
  }

  grouped.transactions = instance.transactions;
  grouped.queries = instance.queries;
  for (Query& query : grouped.queries) {
    std::vector<int> accessed;
    for (int a : query.accessed_attributes) {
      const int g = grouping.mapping[a];
      if (std::find(accessed.begin(), accessed.end(), g) == accessed.end()) {
        accessed.push_back(g);
      }
    }
    query.accessed_attributes = std::move(accessed);
  }
  return out;
}

Partitioning expand_solution(const Partitioning& grouped,
                             const AttributeGrouping& grouping) {
  Partitioning out;
  out.x = grouped.x;
  out.y.reserve(grouping.mapping.size());
  for (int g : grouping.mapping) {
    if (g < 0 || static_cast<std::size_t>(g) >= grouped.y.size()) {
      throw ContractViolation("unknown group id " + std::to_string(g));
    }
    out.y.push_back(grouped.y[g]);
  }
  return out;
}

std::vector<int> order_transactions_by_load(const Instance& instance,
                                            const DerivedCoefficients& d) {
  std::vector<double> weight(instance.transaction_count(), 0.0);
  for (int t = 0; t < instance.transaction_count(); ++t) {
    for (int a = 0; a < instance.attribute_count(); ++a) {
      weight[t] += d.c3(a, t);
    }
  }
  std::vector<int> order(instance.transaction_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return weight[l] > weight[r]; });
  return order;
}

Instance restrict_to_transactions(const Instance& instance,
                                  const std::vector<int>& transaction_ids) {
  Instance out = instance;
  out.transactions.clear();
  out.queries.clear();
  for (int old_t : transaction_ids) {
    const Transaction& tx = instance.transactions.at(old_t);
    Transaction copy{out.transaction_count(), tx.name, {}};
    for (int old_q : tx.query_ids) {
      Query query = instance.queries.at(old_q);
      query.id = out.query_count();
      copy.query_ids.push_back(query.id);
      out.queries.push_back(std::move(query));
    }
    out.transactions.push_back(std::move(copy));
  }
  return out;
}

}  // namespace vpart
