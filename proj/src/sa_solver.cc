#include "vpart/sa_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vpart/reduction.h"

namespace vpart {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_of(const std::vector<double>& values) {
  return *std::max_element(values.begin(), values.end());
}

// Picks `count` distinct indices from [0, n) in a seed-determined order.
std::vector<int> choose_distinct(int n, int count, std::mt19937_64& rng) {
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(count);
  return items;
}

// Incremental bookkeeping for building y around a fixed x.
class ReplicaBuilder {
 public:
  ReplicaBuilder(const Instance& instance, const DerivedCoefficients& d,
                 const std::vector<int>& x)
      : instance_(instance), d_(d), x_(x),
        y_(instance.attribute_count()),
        loads_(instance.site_count, 0.0),
        remote_(instance.query_count(), 0) {}

  const std::vector<SiteSet>& y() const { return y_; }

  double load_change(int a, int s) const {
    double load = d_.c4[a];
    for (int t = 0; t < instance_.transaction_count(); ++t) {
      if (x_[t] == s) load += d_.c3(a, t);
    }
    return load;
  }

  double score_delta(int a, int s) const {
    double objective = d_.c2[a];
    for (int t = 0; t < instance_.transaction_count(); ++t) {
      if (x_[t] == s) objective += d_.c1(a, t);
    }
    if (instance_.p_latency) {
      for (int q = 0; q < instance_.query_count(); ++q) {
        if (d_.delta[q] && d_.alpha(a, q) && remote_[q] == 0 &&
            x_[d_.transaction_of[q]] != s) {
          objective += *instance_.p_latency * instance_.queries[q].frequency;
        }
      }
    }
    const double before = max_of(loads_);
    const double after = std::max(before, loads_[s] + load_change(a, s));
    return instance_.lambda * objective +
           (1.0 - instance_.lambda) * (after - before);
  }

  void add(int a, int s) {
    if (y_[a].contains(s)) return;
    loads_[s] += load_change(a, s);
    for (int q = 0; q < instance_.query_count(); ++q) {
      if (d_.delta[q] && d_.alpha(a, q) && x_[d_.transaction_of[q]] != s) {
        ++remote_[q];
      }
    }
    y_[a].insert(s);
  }

 private:
  const Instance& instance_;
  const DerivedCoefficients& d_;
  const std::vector<int>& x_;
  std::vector<SiteSet> y_;
  std::vector<double> loads_;
  std::vector<int> remote_;
};

Partitioning make_layout(std::vector<int> x, std::vector<SiteSet> y) {
  Partitioning part;
  part.x = std::move(x);
  part.y = std::move(y);
  return part;
}

}  // namespace

void SaConfig::validate() const {
  if (inner_loops < 1) throw std::invalid_argument("inner_loops must be >= 1");
  if (!(cooling > 0 && cooling < 1)) {
    throw std::invalid_argument("cooling must lie in (0, 1)");
  }
  if (!(move_fraction > 0 && move_fraction <= 1)) {
    throw std::invalid_argument("move_fraction must lie in (0, 1]");
  }
  if (!(min_temperature_ratio > 0 && min_temperature_ratio < 1)) {
    throw std::invalid_argument("min_temperature_ratio must lie in (0, 1)");
  }
  if (stall_limit < 1) throw std::invalid_argument("stall_limit must be >= 1");
  if (!(iteration_time_limit > 0) || !(time_limit > 0)) {
    throw std::invalid_argument("time limits must be positive");
  }
}

double initial_temperature(double best_score) {
  if (!(best_score > 0)) {
    throw ContractViolation("initial temperature needs a positive score, got " +
                            std::to_string(best_score));
  }
  return -0.05 * best_score / std::log(0.5);
}

bool accept_move(double delta, double temperature, std::mt19937_64& rng) {
  if (delta <= 0) return true;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < std::exp(-delta / temperature);
}

int move_size(double fraction, int count) {
  if (count <= 0) return 0;
  const int k = static_cast<int>(
      std::ceil(fraction * static_cast<double>(count) - 1e-9));
  return std::clamp(k, 1, count);
}

std::vector<int> perturb_x(const std::vector<int>& x, int site_count,
                           double fraction, std::mt19937_64& rng) {
  std::vector<int> out = x;
  if (site_count <= 1 || x.empty()) return out;
  const int count = move_size(fraction, static_cast<int>(x.size()));
  for (int t : choose_distinct(static_cast<int>(x.size()), count, rng)) {
    std::uniform_int_distribution<int> pick(0, site_count - 2);
    const int s = pick(rng);
    out[t] = s >= x[t] ? s + 1 : s;
  }
  return out;
}

std::vector<SiteSet> perturb_y(const std::vector<SiteSet>& y, int site_count,
                               double fraction, std::mt19937_64& rng) {
  std::vector<SiteSet> out = y;
  if (y.empty()) return out;
  const int count = move_size(fraction, static_cast<int>(y.size()));
  const SiteSet all = SiteSet::all(site_count);
  for (int a : choose_distinct(static_cast<int>(y.size()), count, rng)) {
    const SiteSet missing = SiteSet::from_mask(all.mask() & ~y[a].mask());
    if (missing.empty()) continue;
    const std::vector<int> candidates = missing.sites();
    std::uniform_int_distribution<int> pick(
        0, static_cast<int>(candidates.size()) - 1);
    out[a].insert(candidates[pick(rng)]);
  }
  return out;
}

std::vector<SiteSet> solve_subproblem_fix_x(const Instance& instance,
                                            const DerivedCoefficients& d,
                                            const std::vector<int>& x,
                                            const ReplicaList& required) {
  const int na = instance.attribute_count();
  const int ns = instance.site_count;
  ReplicaBuilder builder(instance, d, x);
  for (int t = 0; t < instance.transaction_count(); ++t) {
    for (int a : d.reads_of_transaction[t]) builder.add(a, x[t]);
  }
  for (const auto& [a, s] : required) builder.add(a, s);

  // Voluntary replicas, cheapest first, kept only while still improving.
  struct Candidate {
    double delta;
    int a;
    int s;
  };
  std::vector<Candidate> candidates;
  for (int a = 0; a < na; ++a) {
    for (int s = 0; s < ns; ++s) {
      if (builder.y()[a].contains(s)) continue;
      const double delta = builder.score_delta(a, s);
      if (delta < 0) candidates.push_back({delta, a, s});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) {
                     return l.delta < r.delta;
                   });
  for (const Candidate& c : candidates) {
    if (builder.score_delta(c.a, c.s) < 0) builder.add(c.a, c.s);
  }

  // Coverage, heaviest attributes first.
  std::vector<int> uncovered;
  std::vector<double> weight(na, 0.0);
  for (int a = 0; a < na; ++a) {
    if (!builder.y()[a].empty()) continue;
    uncovered.push_back(a);
    for (int q = 0; q < instance.query_count(); ++q) weight[a] += d.w(a, q);
  }
  std::stable_sort(uncovered.begin(), uncovered.end(),
                   [&](int l, int r) { return weight[l] > weight[r]; });
  for (int a : uncovered) {
    int best = 0;
    double best_delta = builder.score_delta(a, 0);
    for (int s = 1; s < ns; ++s) {
      const double delta = builder.score_delta(a, s);
      if (delta < best_delta) {
        best_delta = delta;
        best = s;
      }
    }
    builder.add(a, best);
  }
  return builder.y();
}

std::vector<int> solve_subproblem_fix_y(const Instance& instance,
                                        const DerivedCoefficients& d,
                                        const std::vector<SiteSet>& y) {
  const int ns = instance.site_count;
  const double lambda = instance.lambda;
  std::vector<double> loads(ns, 0.0);
  for (int a = 0; a < instance.attribute_count(); ++a) {
    y[a].for_each([&](int s) { loads[s] += d.c4[a]; });
  }

  std::vector<int> x(instance.transaction_count(), 0);
  for (int t : order_transactions_by_load(instance, d)) {
    SiteSet feasible = SiteSet::all(ns);
    for (int a : d.reads_of_transaction[t]) feasible = feasible & y[a];
    if (feasible.empty()) {
      throw FeasibilityError(
          {{"single_sitedness", "no site holds every attribute read by '" +
                                    instance.transactions[t].name + "'"}});
    }
    const double current_max = max_of(loads);
    int best = -1;
    double best_cost = 0;
    double best_load = 0;
    feasible.for_each([&](int s) {
      double objective = 0;
      double load = 0;
      for (int a = 0; a < instance.attribute_count(); ++a) {
        if (!y[a].contains(s)) continue;
        objective += d.c1(a, t);
        load += d.c3(a, t);
      }
      if (instance.p_latency) {
        for (int q : instance.transactions[t].query_ids) {
          if (!d.delta[q]) continue;
          for (int a : instance.queries[q].accessed_attributes) {
            SiteSet remote = y[a];
            remote.erase(s);
            if (!remote.empty()) {
              objective +=
                  *instance.p_latency * instance.queries[q].frequency;
              break;
            }
          }
        }
      }
      const double cost =
          lambda * objective +
          (1.0 - lambda) * (std::max(current_max, loads[s] + load) -
                            current_max);
      if (best < 0 || cost < best_cost) {
        best = s;
        best_cost = cost;
        best_load = load;
      }
    });
    x[t] = best;
    loads[best] += best_load;
  }
  return x;
}

SaResult solve_sa(const Instance& instance, const SaConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const DerivedCoefficients d = derive(instance);
  std::mt19937_64 rng(config.seed);
  const int ns = instance.site_count;

  SaResult result;
  result.seed = config.seed;
  auto finish = [&](const Partitioning& best, int64_t moves) {
    SolveReport& report = result.report;
    report.cost = evaluate(instance, d, best);
    report.partitioning = best;
    report.objective = report.cost->objective;
    report.score = report.cost->score;
    report.nodes = moves;
    report.status = SolveStatus::kHeuristic;
    report.wall_seconds = seconds_since(start);
    return result;
  };

  std::vector<int> x(instance.transaction_count(), 0);
  std::uniform_int_distribution<int> site(0, ns - 1);
  for (int& s : x) s = site(rng);
  Partitioning current =
      make_layout(x, solve_subproblem_fix_x(instance, d, x,
                                            config.required_replicas));
  double current_score = evaluate(instance, d, current).score;
  Partitioning best = current;
  double best_score = current_score;
  if (ns == 1 || !(best_score > 0)) return finish(best, 0);

  const double initial = initial_temperature(best_score);
  double temperature = initial;
  bool fix_x = true;
  int stall = 0;
  int64_t moves = 0;
  for (int outer = 0;; ++outer) {
    int accepted = 0;
    bool improved = false;
    for (int i = 0; i < config.inner_loops; ++i) {
      const auto move_start = Clock::now();
      std::vector<int> x2 = perturb_x(current.x, ns, config.move_fraction, rng);
      std::vector<SiteSet> y2 =
          perturb_y(current.y, ns, config.move_fraction, rng);
      Partitioning candidate =
          fix_x ? make_layout(x2, solve_subproblem_fix_x(
                                      instance, d, x2,
                                      config.required_replicas))
                : make_layout(solve_subproblem_fix_y(instance, d, y2), y2);
      fix_x = !fix_x;
      ++moves;
      if (seconds_since(move_start) > config.iteration_time_limit) continue;
      const double score = evaluate(instance, d, candidate).score;
      if (accept_move(score - current_score, temperature, rng)) {
        current = std::move(candidate);
        current_score = score;
        ++accepted;
        if (score < best_score) {
          best = current;
          best_score = score;
          improved = true;
        }
      }
    }
    result.trace.records.push_back(
        {outer, temperature, best_score, current_score, accepted});
    stall = improved ? 0 : stall + 1;
    temperature *= config.cooling;
    if (temperature < config.min_temperature_ratio * initial ||
        stall >= config.stall_limit ||
        seconds_since(start) > config.time_limit) {
      break;
    }
  }
  return finish(best, moves);
}

SaResult solve_sa_runs(const Instance& instance, const SaConfig& config,
                       int runs) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  const auto start = Clock::now();
  std::vector<std::future<SaResult>> futures;
  for (int r = 0; r < runs; ++r) {
    SaConfig run_config = config;
    run_config.seed = config.seed + static_cast<uint64_t>(r);
    futures.push_back(std::async(std::launch::async, [&instance, run_config] {
      return solve_sa(instance, run_config);
    }));
  }
  std::vector<SaResult> results;
  for (auto& f : futures) results.push_back(f.get());
  std::size_t best = 0;
  int64_t moves = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    moves += results[i].report.nodes;
    if (results[i].report.score < results[best].report.score) best = i;
  }
  SaResult out = std::move(results[best]);
  out.report.nodes = moves;
  out.report.wall_seconds = seconds_since(start);
  return out;
}

}  // namespace vpart
