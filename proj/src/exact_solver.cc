#include "vpart/exact_solver.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "vpart/mip.h"
#include "vpart/sa_solver.h"

namespace vpart {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasibleTimeLimit:
      return "feasible-time-limit";
    case SolveStatus::kNoSolutionTimeLimit:
      return "no-solution-time-limit";
    case SolveStatus::kHeuristic:
      return "heuristic";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegrality = 1e-6;
constexpr int64_t kNodeIterationLimit = 50000;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool honors_options(const Partitioning& part, const ExactConfig& config) {
  if (config.disjoint) {
    for (const SiteSet& sites : part.y) {
      if (sites.size() != 1) return false;
    }
  }
  for (const auto& [a, s] : config.required_replicas) {
    if (!part.y[a].contains(s)) return false;
  }
  return true;
}

struct Node {
  std::vector<std::pair<int, double>> fixings;
  double bound = -std::numeric_limits<double>::infinity();
};

// Most fractional branching variable of the lowest priority class, or -1.
int choose_branch(const MipModel& model, const std::vector<double>& value) {
  int best = -1;
  int best_class = std::numeric_limits<int>::max();
  double best_fraction = 0;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const int cls = model.variables[j].branch_priority;
    if (cls < 0 || cls > best_class) continue;
    const double v = value[j];
    const double fraction = std::min(v - std::floor(v), std::ceil(v) - v);
    if (fraction <= kIntegrality) continue;
    if (cls < best_class || fraction > best_fraction) {
      best = static_cast<int>(j);
      best_class = cls;
      best_fraction = fraction;
    }
  }
  return best;
}

}  // namespace

SolveReport solve_exact(const Instance& instance, const ExactConfig& config) {
  const auto start = Clock::now();
  const DerivedCoefficients d = derive(instance);

  MipOptions options;
  options.compact = true;
  options.disjoint = config.disjoint;
  options.required_replicas = config.required_replicas;
  // Required replicas make sites distinguishable.
  options.symmetry_breaking =
      config.symmetry_breaking && config.required_replicas.empty();
  const MipModel model = build_mip(instance, d, options);

  SolveReport report;
  std::optional<Partitioning> incumbent;
  double incumbent_score = std::numeric_limits<double>::infinity();
  auto consider = [&](const Partitioning& part) {
    if (!check_feasible(instance, d, part).empty() ||
        !honors_options(part, config)) {
      return;
    }
    const double score = evaluate(instance, d, part).score;
    if (score < incumbent_score) {
      incumbent_score = score;
      incumbent = part;
    }
  };
  if (config.warm_start) {
    consider(*config.warm_start);
  } else if (config.disjoint) {
    consider(Partitioning::single_site(instance));
  } else {
    SaConfig sa;
    sa.required_replicas = config.required_replicas;
    sa.time_limit = std::min(10.0, config.time_limit_seconds / 4);
    consider(*solve_sa(instance, sa).report.partitioning);
  }

  auto cutoff = [&] {
    if (!incumbent) return std::numeric_limits<double>::infinity();
    const double magnitude = std::abs(incumbent_score);
    return incumbent_score -
           std::max(config.gap * magnitude, 1e-9 * std::max(1.0, magnitude));
  };

  const LpProblem lp = relaxation(model);
  DualSimplex simplex(lp);
  std::vector<Node> stack{Node{}};
  std::vector<int> applied;
  double pruned_bound = std::numeric_limits<double>::infinity();
  bool timed_out = false;
  int64_t nodes = 0;

  while (!stack.empty()) {
    if (seconds_since(start) > config.time_limit_seconds) {
      timed_out = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.bound >= cutoff()) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    for (int v : applied) simplex.set_bounds(v, lp.lower[v], lp.upper[v]);
    applied.clear();
    for (const auto& [v, value] : node.fixings) {
      simplex.set_bounds(v, value, value);
      applied.push_back(v);
    }
    const LpStatus status = simplex.solve(kNodeIterationLimit);
    ++nodes;
    if (status == LpStatus::kInfeasible) continue;
    const double bound = std::max(node.bound, simplex.objective());
    if (bound >= cutoff()) {
      pruned_bound = std::min(pruned_bound, bound);
      continue;
    }
    const std::vector<double> value = simplex.primal();
    const int branch = choose_branch(model, value);
    if (branch < 0) {
      consider(decode(model, value));
      continue;
    }
    const double nearer = value[branch] >= 0.5 ? 1.0 : 0.0;
    for (double side : {1.0 - nearer, nearer}) {
      Node child{node.fixings, bound};
      child.fixings.emplace_back(branch, side);
      stack.push_back(std::move(child));
    }
  }

  report.nodes = nodes;
  if (!incumbent) {
    if (!timed_out) {
      throw std::runtime_error(
          "the model has no feasible solution under the given options");
    }
    report.status = SolveStatus::kNoSolutionTimeLimit;
    report.wall_seconds = seconds_since(start);
    return report;
  }
  report.status =
      timed_out ? SolveStatus::kFeasibleTimeLimit : SolveStatus::kOptimal;
  double lower = std::min(pruned_bound, incumbent_score);
  for (const Node& node : stack) lower = std::min(lower, node.bound);
  if (std::isfinite(lower)) {
    report.gap = incumbent_score == 0
                     ? 0.0
                     : std::max(0.0, (incumbent_score - lower) /
                                         std::abs(incumbent_score));
  }
  report.cost = evaluate(instance, d, *incumbent);
  report.partitioning = std::move(incumbent);
  report.objective = report.cost->objective;
  report.score = report.cost->score;
  report.wall_seconds = seconds_since(start);
  return report;
}

double layout_count(const Instance& instance) {
  const double sites = instance.site_count;
  return std::pow(sites, instance.transaction_count()) *
         std::pow(std::exp2(sites) - 1.0, instance.attribute_count());
}

namespace {

// Contribution of one attribute placed on one site mask, for a fixed x.
struct MaskContribution {
  uint64_t mask = 0;
  long double objective = 0;
  std::vector<long double> loads;
  std::vector<std::pair<int, int>> remote;  // (write query, remote replicas)
};

}  // namespace

BruteForceResult brute_force(const Instance& instance,
                             const BruteForceConfig& config) {
  const DerivedCoefficients d = derive(instance);
  const double count = layout_count(instance);
  if (count > config.budget) {
    throw SizeError("brute force would enumerate " + std::to_string(count) +
                    " layouts, above the budget of " +
                    std::to_string(config.budget));
  }
  const int nt = instance.transaction_count();
  const int na = instance.attribute_count();
  const int ns = instance.site_count;
  const int nq = instance.query_count();
  const uint64_t full = SiteSet::all(ns).mask();
  const long double p = instance.p;
  const long double lambda = instance.lambda;

  std::vector<uint64_t> required(na, 0);
  for (const auto& [a, s] : config.required_replicas) {
    if (a < 0 || a >= na || s < 0 || s >= ns) {
      throw ContractViolation("required replica out of range");
    }
    required[a] |= uint64_t{1} << s;
  }
  std::vector<std::vector<int>> queries_of(na);
  for (int q = 0; q < nq; ++q) {
    for (int a : d.touched_by_query[q]) queries_of[a].push_back(q);
  }

  BruteForceResult result;
  long double best = std::numeric_limits<long double>::infinity();
  std::vector<int> best_x;
  std::vector<uint64_t> best_y;

  std::vector<int> x(nt, 0);
  std::vector<std::vector<MaskContribution>> options(na);
  std::vector<std::size_t> pick(na);
  std::vector<long double> loads(ns);
  std::vector<int> remote(nq);
  while (true) {
    bool empty = false;
    for (int a = 0; a < na && !empty; ++a) {
      uint64_t forced = required[a];
      for (int t = 0; t < nt; ++t) {
        if (d.phi(a, t)) forced |= uint64_t{1} << x[t];
      }
      options[a].clear();
      for (uint64_t mask = 1; mask <= full; ++mask) {
        if ((mask & forced) != forced) continue;
        if (config.disjoint && std::popcount(mask) != 1) continue;
        MaskContribution c;
        c.mask = mask;
        c.loads.assign(ns, 0);
        const SiteSet sites = SiteSet::from_mask(mask);
        for (int q : queries_of[a]) {
          const int home = x[d.transaction_of[q]];
          const long double w = d.w(a, q);
          if (!d.delta[q]) {
            if (sites.contains(home)) {
              c.objective += w;
              c.loads[home] += w;
            }
            continue;
          }
          c.objective += w * sites.size();
          sites.for_each([&](int s) { c.loads[s] += w; });
          if (d.alpha(a, q)) {
            const int r = sites.size() - (sites.contains(home) ? 1 : 0);
            c.objective += p * w * r;
            c.remote.emplace_back(q, r);
          }
        }
        options[a].push_back(std::move(c));
      }
      empty = options[a].empty();
    }

    if (!empty) {
      long double objective = 0;
      std::fill(loads.begin(), loads.end(), 0);
      std::fill(remote.begin(), remote.end(), 0);
      auto apply = [&](const MaskContribution& c, int sign) {
        objective += sign * c.objective;
        for (int s = 0; s < ns; ++s) loads[s] += sign * c.loads[s];
        for (const auto& [q, r] : c.remote) remote[q] += sign * r;
      };
      std::fill(pick.begin(), pick.end(), 0);
      for (int a = 0; a < na; ++a) apply(options[a][0], +1);
      while (true) {
        long double total = objective;
        if (instance.p_latency) {
          for (int q = 0; q < nq; ++q) {
            if (remote[q] > 0) {
              total += static_cast<long double>(*instance.p_latency) *
                       instance.queries[q].frequency;
            }
          }
        }
        const long double m = *std::max_element(loads.begin(), loads.end());
        const long double score = lambda * total + (1 - lambda) * m;
        ++result.enumerated;
        if (best_x.empty() ||
            score < best - 1e-10L * std::max<long double>(1, std::abs(best))) {
          best = score;
          best_x = x;
          best_y.resize(na);
          for (int a = 0; a < na; ++a) best_y[a] = options[a][pick[a]].mask;
        }
        // Odometer, last attribute fastest.
        int a = na - 1;
        while (a >= 0) {
          apply(options[a][pick[a]], -1);
          if (++pick[a] < options[a].size()) {
            apply(options[a][pick[a]], +1);
            break;
          }
          pick[a] = 0;
          apply(options[a][0], +1);
          --a;
        }
        if (a < 0) break;
      }
    }

    int t = nt - 1;
    while (t >= 0 && ++x[t] == ns) x[t--] = 0;
    if (t < 0) break;
  }

  if (best_x.empty() && nt > 0) {
    throw std::runtime_error("no feasible layout under the given options");
  }
  result.partitioning.x = best_x;
  for (uint64_t mask : best_y) {
    result.partitioning.y.push_back(SiteSet::from_mask(mask));
  }
  const CostBreakdown cost = evaluate(instance, d, result.partitioning);
  result.objective = cost.objective;
  result.score = cost.score;
  return result;
}

}  // namespace vpart
