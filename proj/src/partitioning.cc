#include "vpart/partitioning.h"

#include <algorithm>
#include <string>

namespace vpart {

Partitioning Partitioning::single_site(const Instance& instance) {
  Partitioning part;
  part.x.assign(instance.transaction_count(), 0);
  part.y.assign(instance.attribute_count(), SiteSet{0});
  return part;
}

FeasibilityError::FeasibilityError(std::vector<Violation> violations)
    : std::runtime_error("infeasible partitioning:\n" +
                         format_violations(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> check_feasible(const Instance& instance,
                                      const DerivedCoefficients& derived,
                                      const Partitioning& part) {
  std::vector<Violation> out;
  const int sites = instance.site_count;
  if (part.x.size() != instance.transactions.size() ||
      part.y.size() != instance.attributes.size()) {
    out.push_back({"shape", "partitioning has " +
                                std::to_string(part.x.size()) +
                                " transactions and " +
                                std::to_string(part.y.size()) +
                                " attributes, expected " +
                                std::to_string(instance.transaction_count()) +
                                " and " +
                                std::to_string(instance.attribute_count())});
    return out;
  }
  for (int t = 0; t < instance.transaction_count(); ++t) {
    if (part.x[t] < 0 || part.x[t] >= sites) {
      out.push_back({"assignment", "transaction '" +
                                       instance.transactions[t].name +
                                       "' is on site " +
                                       std::to_string(part.x[t]) +
                                       " outside [0, " +
                                       std::to_string(sites) + ")"});
    }
  }
  const SiteSet valid = SiteSet::all(sites);
  for (int a = 0; a < instance.attribute_count(); ++a) {
    if (part.y[a].empty()) {
      out.push_back({"coverage", "attribute '" + instance.qualified_name(a) +
                                     "' is placed on no site"});
    } else if (!valid.includes(part.y[a])) {
      out.push_back({"site_range", "attribute '" +
                                       instance.qualified_name(a) +
                                       "' is placed on a site outside [0, " +
                                       std::to_string(sites) + ")"});
    }
  }
  for (int t = 0; t < instance.transaction_count(); ++t) {
    const int s = part.x[t];
    if (s < 0 || s >= sites) continue;
    for (int a : derived.reads_of_transaction[t]) {
      if (!part.y[a].contains(s)) {
        out.push_back({"single_sitedness",
                       "transaction '" + instance.transactions[t].name +
                           "' reads '" + instance.qualified_name(a) +
                           "' which is not on its site " + std::to_string(s)});
      }
    }
  }
  return out;
}

namespace {

void require_feasible(const Instance& instance,
                      const DerivedCoefficients& derived,
                      const Partitioning& part) {
  if (auto v = check_feasible(instance, derived, part); !v.empty()) {
    throw FeasibilityError(std::move(v));
  }
}

double score_of(const Instance& instance, double objective, double max_load) {
  return instance.lambda * objective + (1.0 - instance.lambda) * max_load;
}

// Per-site Eq. (5) loads from c3/c4.
std::vector<double> folded_loads(const Instance& instance,
                                 const DerivedCoefficients& d,
                                 const Partitioning& part) {
  std::vector<double> loads(instance.site_count, 0.0);
  for (int a = 0; a < instance.attribute_count(); ++a) {
    part.y[a].for_each([&](int s) { loads[s] += d.c4[a]; });
    for (int t = 0; t < instance.transaction_count(); ++t) {
      if (part.y[a].contains(part.x[t])) loads[part.x[t]] += d.c3(a, t);
    }
  }
  return loads;
}

double latency_of(const Instance& instance, const std::vector<uint8_t>& psi) {
  if (!instance.p_latency) return 0.0;
  double sum = 0;
  for (int q = 0; q < instance.query_count(); ++q) {
    if (psi[q]) sum += instance.queries[q].frequency;
  }
  return *instance.p_latency * sum;
}

}  // namespace

std::vector<uint8_t> remote_write_flags(const Instance& instance,
                                        const DerivedCoefficients& d,
                                        const Partitioning& part) {
  std::vector<uint8_t> psi(instance.query_count(), 0);
  for (const Query& query : instance.queries) {
    if (!query.is_write()) continue;
    const int home = part.x[d.transaction_of[query.id]];
    for (int a : query.accessed_attributes) {
      SiteSet remote = part.y[a];
      remote.erase(home);
      if (!remote.empty()) {
        psi[query.id] = 1;
        break;
      }
    }
  }
  return psi;
}

CostBreakdown evaluate(const Instance& instance,
                       const DerivedCoefficients& d,
                       const Partitioning& part) {
  require_feasible(instance, d, part);
  CostBreakdown cost;
  cost.site_loads.assign(instance.site_count, 0.0);
  std::vector<uint8_t> psi(instance.query_count(), 0);

  for (const Query& query : instance.queries) {
    const int q = query.id;
    const int home = part.x[d.transaction_of[q]];
    for (int a : d.touched_by_query[q]) {
      const double w = d.w(a, q);
      const SiteSet& replicas = part.y[a];
      if (!query.is_write()) {
        if (replicas.contains(home)) {
          cost.read_access += w;
          cost.site_loads[home] += w;
        }
        continue;
      }
      // Writes touch every replica of every fraction of the written table.
      cost.write_access += w * replicas.size();
      replicas.for_each([&](int s) { cost.site_loads[s] += w; });
      if (d.alpha(a, q)) {
        const int remote = replicas.size() - (replicas.contains(home) ? 1 : 0);
        cost.transfer += w * remote;
        if (remote > 0) psi[q] = 1;
      }
    }
  }

  cost.objective =
      cost.read_access + cost.write_access + instance.p * cost.transfer;
  if (instance.p_latency) {
    cost.latency = latency_of(instance, psi);
    cost.objective += *cost.latency;
  }
  cost.max_load =
      *std::max_element(cost.site_loads.begin(), cost.site_loads.end());
  cost.score = score_of(instance, cost.objective, cost.max_load);
  return cost;
}

FoldedCost evaluate_folded(const Instance& instance,
                           const DerivedCoefficients& d,
                           const Partitioning& part) {
  require_feasible(instance, d, part);
  FoldedCost cost;
  for (int a = 0; a < instance.attribute_count(); ++a) {
    cost.objective += d.c2[a] * part.y[a].size();
    for (int t = 0; t < instance.transaction_count(); ++t) {
      if (part.y[a].contains(part.x[t])) cost.objective += d.c1(a, t);
    }
  }
  if (instance.p_latency) {
    // psi_q from the remote replica count n_q = sum alpha (1 - x) y.
    std::vector<uint8_t> psi(instance.query_count(), 0);
    for (int q = 0; q < instance.query_count(); ++q) {
      if (!d.delta[q]) continue;
      const int home = part.x[d.transaction_of[q]];
      int remote = 0;
      for (int a = 0; a < instance.attribute_count(); ++a) {
        if (!d.alpha(a, q)) continue;
        remote += part.y[a].size() - (part.y[a].contains(home) ? 1 : 0);
      }
      psi[q] = remote > 0;
    }
    cost.objective += latency_of(instance, psi);
  }
  const std::vector<double> loads = folded_loads(instance, d, part);
  cost.max_load = *std::max_element(loads.begin(), loads.end());
  cost.score = score_of(instance, cost.objective, cost.max_load);
  return cost;
}

namespace {

// Latency change when `site` gains or loses a replica of `attribute`.
double latency_delta(const Instance& instance, const DerivedCoefficients& d,
                     const Partitioning& part, int attribute, int site,
                     bool adding) {
  if (!instance.p_latency) return 0.0;
  Partitioning after = part;
  if (adding) {
    after.y[attribute].insert(site);
  } else {
    after.y[attribute].erase(site);
  }
  const auto before_flags = remote_write_flags(instance, d, part);
  const auto after_flags = remote_write_flags(instance, d, after);
  return latency_of(instance, after_flags) - latency_of(instance, before_flags);
}

ScoreDelta replica_delta(const Instance& instance,
                         const DerivedCoefficients& d,
                         const Partitioning& part, int attribute, int site,
                         bool adding) {
  double objective = d.c2[attribute];
  double load = d.c4[attribute];
  for (int t = 0; t < instance.transaction_count(); ++t) {
    if (part.x[t] != site) continue;
    objective += d.c1(attribute, t);
    load += d.c3(attribute, t);
  }
  const double sign = adding ? 1.0 : -1.0;
  std::vector<double> loads = folded_loads(instance, d, part);
  const double before = *std::max_element(loads.begin(), loads.end());
  loads[site] += sign * load;
  const double after = *std::max_element(loads.begin(), loads.end());

  ScoreDelta delta;
  delta.objective = sign * objective +
                    latency_delta(instance, d, part, attribute, site, adding);
  delta.max_load = after - before;
  delta.score = instance.lambda * delta.objective +
                (1.0 - instance.lambda) * delta.max_load;
  return delta;
}

}  // namespace

ScoreDelta delta_add_replica(const Instance& instance,
                             const DerivedCoefficients& d,
                             const Partitioning& part, int attribute,
                             int site) {
  require_feasible(instance, d, part);
  if (attribute < 0 || attribute >= instance.attribute_count() || site < 0 ||
      site >= instance.site_count) {
    throw ContractViolation("replica index out of range");
  }
  if (part.y[attribute].contains(site)) {
    throw ContractViolation("attribute '" + instance.qualified_name(attribute) +
                            "' already has a replica on site " +
                            std::to_string(site));
  }
  return replica_delta(instance, d, part, attribute, site, /*adding=*/true);
}

ScoreDelta delta_remove_replica(const Instance& instance,
                                const DerivedCoefficients& d,
                                const Partitioning& part, int attribute,
                                int site) {
  require_feasible(instance, d, part);
  if (attribute < 0 || attribute >= instance.attribute_count() || site < 0 ||
      site >= instance.site_count || !part.y[attribute].contains(site)) {
    throw ContractViolation("no replica to remove");
  }
  if (part.y[attribute].size() == 1) {
    throw ContractViolation("removing the last replica breaks coverage");
  }
  for (int t = 0; t < instance.transaction_count(); ++t) {
    if (part.x[t] == site && d.phi(attribute, t)) {
      throw ContractViolation("replica is required by single-sitedness");
    }
  }
  return replica_delta(instance, d, part, attribute, site, /*adding=*/false);
}

}  // namespace vpart
