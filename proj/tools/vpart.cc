// vpart: command-line front end for the vertical partitioning advisor.
//
// Exit codes: 0 success, 1 usage, 2 invalid input or infeasible layout,
// 3 solver timeout without a solution.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "report.h"
#include "vpart/exact_solver.h"
#include "vpart/instance_gen.h"
#include "vpart/io.h"
#include "vpart/mip.h"
#include "vpart/reduction.h"
#include "vpart/sa_solver.h"

namespace vpart::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTimeout = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Defaults read from the file named by VPART_CONFIG; flags override them.
struct Defaults {
  std::optional<int> sites;
  std::optional<double> p;
  std::optional<double> lambda;
  std::optional<double> p_latency;
  double time_limit = 1800;
  double gap = 1e-3;
  uint64_t seed = 1;
  int runs = 1;
};

Defaults load_defaults() {
  Defaults d;
  const char* path = std::getenv("VPART_CONFIG");
  if (path == nullptr || *path == '\0') return d;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad VPART_CONFIG file: ") + e.what());
  }
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const auto& v = item.value();
    if (key == "sites") {
      d.sites = v.get<int>();
    } else if (key == "p") {
      d.p = v.get<double>();
    } else if (key == "lambda") {
      d.lambda = v.get<double>();
    } else if (key == "p_latency") {
      d.p_latency = v.get<double>();
    } else if (key == "time_limit") {
      d.time_limit = v.get<double>();
    } else if (key == "gap") {
      d.gap = v.get<double>();
    } else if (key == "seed") {
      d.seed = v.get<uint64_t>();
    } else if (key == "runs") {
      d.runs = v.get<int>();
    } else {
      throw FormatError("unknown key '" + key + "' in VPART_CONFIG file");
    }
  }
  return d;
}

// Instance parameters that may be overridden on the command line.
struct ModelFlags {
  std::optional<int> sites;
  std::optional<double> p;
  std::optional<double> lambda;
  std::optional<double> p_latency;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--sites", sites, "Number of sites |S|");
    cmd.add_option("--p", p, "Network penalty p");
    cmd.add_option("--lambda", lambda, "Weight of total cost against max load");
    cmd.add_option("--p-latency", p_latency, "Latency penalty p_l");
  }

  Instance load(const std::string& path, const Defaults& defaults) const {
    Instance instance = read_instance(read_file(path));
    if (auto v = sites ? sites : defaults.sites) instance.site_count = *v;
    if (auto v = p ? p : defaults.p) instance.p = *v;
    if (auto v = lambda ? lambda : defaults.lambda) instance.lambda = *v;
    if (auto v = p_latency ? p_latency : defaults.p_latency) {
      instance.p_latency = *v;
    }
    if (auto violations = validate(instance); !violations.empty()) {
      throw ValidationError(std::move(violations));
    }
    return instance;
  }
};

struct SolverFlags {
  std::string algo = "sa";
  double time_limit = 1800;
  double gap = 1e-3;
  uint64_t seed = 1;
  int runs = 1;
  bool group = false;
  std::optional<double> prioritize;

  void add_to(CLI::App& cmd, const Defaults& defaults,
              const std::vector<std::string>& algos) {
    time_limit = defaults.time_limit;
    gap = defaults.gap;
    seed = defaults.seed;
    runs = defaults.runs;
    cmd.add_option("--algo", algo, "Solver")
        ->check(CLI::IsMember(algos))
        ->capture_default_str();
    cmd.add_option("--time-limit", time_limit, "Time limit in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--gap", gap, "Relative optimality gap (exact)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--seed", seed, "Random seed (sa)")->capture_default_str();
    cmd.add_option("--runs", runs, "Concurrent seeded runs (sa)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--group", group,
                 "Merge attributes with identical access patterns first");
    cmd.add_option("--prioritize", prioritize,
                   "Solve this fraction of the heaviest transactions first")
        ->check(CLI::Range(0.0, 1.0));
  }

  nlohmann::json echo(const Instance& instance) const {
    nlohmann::json out = {{"algo", algo},
                          {"sites", instance.site_count},
                          {"p", instance.p},
                          {"lambda", instance.lambda},
                          {"time_limit", time_limit},
                          {"gap", gap},
                          {"seed", seed},
                          {"runs", runs},
                          {"group", group}};
    if (instance.p_latency) out["p_latency"] = *instance.p_latency;
    if (prioritize) out["prioritize"] = *prioritize;
    return out;
  }
};

struct SolveOutcome {
  SolveReport report;
  std::optional<SaTrace> trace;
};

SolveOutcome solve_plain(const Instance& instance, const SolverFlags& flags,
                         bool disjoint, const ReplicaList& required) {
  SolveOutcome out;
  if (flags.algo == "exact") {
    ExactConfig config;
    config.time_limit_seconds = flags.time_limit;
    config.gap = flags.gap;
    config.disjoint = disjoint;
    config.required_replicas = required;
    out.report = solve_exact(instance, config);
  } else if (flags.algo == "brute") {
    BruteForceConfig config;
    config.disjoint = disjoint;
    config.required_replicas = required;
    const BruteForceResult result = brute_force(instance, config);
    const DerivedCoefficients d = derive(instance);
    out.report.partitioning = result.partitioning;
    out.report.cost = evaluate(instance, d, result.partitioning);
    out.report.objective = result.objective;
    out.report.score = result.score;
    out.report.gap = 0.0;
    out.report.nodes = result.enumerated;
    out.report.status = SolveStatus::kOptimal;
  } else {
    if (disjoint) {
      throw UsageError("the sa solver does not support disjoint layouts");
    }
    SaConfig config;
    config.seed = flags.seed;
    config.time_limit = flags.time_limit;
    config.required_replicas = required;
    SaResult result = solve_sa_runs(instance, config, flags.runs);
    out.report = std::move(result.report);
    out.trace = std::move(result.trace);
  }
  return out;
}

// Applies grouping and prioritized solving around the chosen solver.
SolveOutcome run_solver(const Instance& instance, const SolverFlags& flags,
                        bool disjoint = false) {
  const auto start = std::chrono::steady_clock::now();
  const DerivedCoefficients d = derive(instance);
  std::optional<GroupedInstance> grouped;
  if (flags.group) grouped = group_attributes(instance, d);
  const Instance& target = grouped ? grouped->instance : instance;

  SolveOutcome out;
  if (flags.prioritize) {
    std::optional<SaTrace> trace;
    const DerivedCoefficients target_d = derive(target);
    out.report = solve_prioritized(
        target, target_d, *flags.prioritize,
        [&](const Instance& part, const ReplicaList& required) {
          SolveOutcome step = solve_plain(part, flags, disjoint, required);
          trace = step.trace;
          return step.report;
        });
    out.trace = trace;
  } else {
    out = solve_plain(target, flags, disjoint, {});
  }
  if (grouped && out.report.partitioning) {
    out.report.partitioning =
        expand_solution(*out.report.partitioning, grouped->grouping);
  }
  if (out.report.partitioning) {
    out.report.cost = evaluate(instance, d, *out.report.partitioning);
    out.report.objective = out.report.cost->objective;
    out.report.score = out.report.cost->score;
  }
  out.report.wall_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
  return out;
}

int cmd_gen(const std::string& preset, const GenParams& params,
            const ModelFlags& model, const Defaults& defaults,
            const std::string& output) {
  Instance instance;
  if (preset == "tpcc") {
    instance = tpcc();
  } else {
    GenParams p = params;
    if (auto violations = p.validate(); !violations.empty()) {
      throw UsageError(format_violations(violations));
    }
    instance = generate(p);
  }
  if (auto v = model.sites ? model.sites : defaults.sites) {
    instance.site_count = *v;
  }
  if (auto v = model.p ? model.p : defaults.p) instance.p = *v;
  if (auto v = model.lambda ? model.lambda : defaults.lambda) {
    instance.lambda = *v;
  }
  if (auto v = model.p_latency ? model.p_latency : defaults.p_latency) {
    instance.p_latency = *v;
  }
  if (auto violations = validate(instance); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  const std::string text = write_instance(instance);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    write_file(output, text);
  }
  return kExitOk;
}

int cmd_solve(const std::string& path, const ModelFlags& model,
              const SolverFlags& flags, const Defaults& defaults,
              const std::string& output, bool trace, bool structured) {
  const Instance instance = model.load(path, defaults);
  SolveOutcome outcome = run_solver(instance, flags);
  RunRecord record{fingerprint(instance), flags.algo, flags.echo(instance),
                   outcome.report, utc_timestamp()};
  if (structured) {
    nlohmann::json doc = record_to_json(record);
    if (trace && outcome.trace) {
      nlohmann::json rows = nlohmann::json::array();
      for (const SaTraceRecord& r : outcome.trace->records) {
        rows.push_back({{"loop", r.outer_loop},
                        {"temperature", r.temperature},
                        {"best", r.best_score},
                        {"current", r.current_score},
                        {"accepted", r.accepted}});
      }
      doc["trace"] = rows;
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    print_record(std::cout, record);
    if (trace && outcome.trace) print_trace(std::cout, *outcome.trace);
  }
  if (!outcome.report.partitioning) {
    std::cerr << "no solution found within the time limit\n";
    return kExitTimeout;
  }
  if (!output.empty()) {
    write_file(output,
               write_partitioning(instance, *outcome.report.partitioning));
  }
  return kExitOk;
}

int cmd_eval(const std::string& instance_path,
             const std::string& partitioning_path, const ModelFlags& model,
             const Defaults& defaults, bool structured) {
  const Instance instance = model.load(instance_path, defaults);
  const DerivedCoefficients d = derive(instance);
  const Partitioning part =
      read_partitioning(instance, read_file(partitioning_path));
  if (auto violations = check_feasible(instance, d, part);
      !violations.empty()) {
    throw FeasibilityError(std::move(violations));
  }
  const CostBreakdown cost = evaluate(instance, d, part);
  if (structured) {
    std::cout << nlohmann::json{{"fingerprint", fingerprint(instance)},
                                {"cost", cost_to_json(cost)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "instance " << fingerprint(instance) << "\n";
    print_cost(std::cout, cost);
  }
  return kExitOk;
}

int cmd_compare(const std::string& path, const std::string& mode,
                const ModelFlags& model, const SolverFlags& flags,
                const Defaults& defaults, bool structured) {
  const Instance instance = model.load(path, defaults);
  SolveOutcome first;
  SolveOutcome second;
  std::string first_label;
  std::string second_label;
  if (mode == "replication") {
    first_label = "replicated";
    second_label = "disjoint";
    first = run_solver(instance, flags);
    second = run_solver(instance, flags, /*disjoint=*/true);
  } else {
    first_label = "local (p=0)";
    second_label = "remote (p=" + nlohmann::json(instance.p).dump() + ")";
    Instance local = instance;
    local.p = 0;
    first = run_solver(local, flags);
    second = run_solver(instance, flags);
  }
  if (!first.report.partitioning || !second.report.partitioning) {
    std::cerr << "no solution found within the time limit\n";
    return kExitTimeout;
  }
  const CostBreakdown& a = *first.report.cost;
  const CostBreakdown& b = *second.report.cost;
  const double objective_ratio = b.objective == 0 ? 1 : a.objective / b.objective;
  const double score_ratio = b.score == 0 ? 1 : a.score / b.score;
  if (structured) {
    std::cout << nlohmann::json{{"fingerprint", fingerprint(instance)},
                                {"mode", mode},
                                {"algo", flags.algo},
                                {first_label, cost_to_json(a)},
                                {second_label, cost_to_json(b)},
                                {"objective_ratio", objective_ratio},
                                {"score_ratio", score_ratio}}
                     .dump(2)
              << "\n";
    return kExitOk;
  }
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %18s %18s %8s\n", "",
                first_label.c_str(), second_label.c_str(), "ratio");
  std::cout << "instance " << fingerprint(instance) << "\n" << line;
  auto row = [&](const char* label, double x, double y) {
    std::snprintf(line, sizeof(line), "%-12s %18.2f %18.2f %8.3f\n", label, x,
                  y, y == 0 ? 1.0 : x / y);
    std::cout << line;
  };
  row("objective", a.objective, b.objective);
  row("max load", a.max_load, b.max_load);
  row("score", a.score, b.score);
  return kExitOk;
}

int cmd_export(const std::string& path, const std::string& format,
               const ModelFlags& model, const Defaults& defaults,
               const std::string& output, bool symmetry) {
  const ExportFormat fmt = parse_export_format(format);
  const Instance instance = model.load(path, defaults);
  MipOptions options;
  options.symmetry_breaking = symmetry;
  const std::string text =
      export_model(build_mip(instance, derive(instance), options), fmt);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    write_file(output, text);
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  const Defaults defaults = load_defaults();
  CLI::App app{"Vertical partitioning advisor"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string preset;
  GenParams params;
  ModelFlags gen_model;
  std::string gen_output;
  gen->add_option("--preset", preset, "Built-in instance")
      ->check(CLI::IsMember({"tpcc"}));
  gen->add_option("--seed", params.seed, "Random seed");
  gen->add_option("--transactions", params.transaction_count, "|T|");
  gen->add_option("--tables", params.table_count, "Number of tables");
  gen->add_option("--max-queries", params.max_queries_per_transaction,
                  "Max queries per transaction (A)");
  gen->add_option("--update-percent", params.update_percent,
                  "Percent of write queries (B)");
  gen->add_option("--max-attrs", params.max_attributes_per_table,
                  "Max attributes per table (C)");
  gen->add_option("--max-table-refs", params.max_table_refs_per_query,
                  "Max table references per query (D)");
  gen->add_option("--max-attr-refs", params.max_attribute_refs_per_query,
                  "Max attribute references per query (E)");
  gen->add_option("--widths", params.allowed_widths,
                  "Allowed attribute widths (F)")
      ->delimiter(',');
  gen_model.add_to(*gen);
  gen->add_option("-o,--output", gen_output, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string solve_path;
  ModelFlags solve_model;
  SolverFlags solve_flags;
  std::string solve_output;
  bool trace = false;
  std::string solve_format = "text";
  solve->add_option("instance", solve_path, "Instance file")->required();
  solve_model.add_to(*solve);
  solve_flags.add_to(*solve, defaults, {"sa", "exact", "brute"});
  solve->add_option("-o,--output", solve_output, "Partitioning output file");
  solve->add_flag("--trace", trace, "Print the annealing trace (sa)");
  solve->add_option("--format", solve_format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a partitioning");
  std::string eval_instance;
  std::string eval_partitioning;
  ModelFlags eval_model;
  std::string eval_format = "text";
  eval->add_option("instance", eval_instance, "Instance file")->required();
  eval->add_option("partitioning", eval_partitioning, "Partitioning file")
      ->required();
  eval_model.add_to(*eval);
  eval->add_option("--format", eval_format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* compare = app.add_subcommand("compare", "Compare two settings");
  std::string compare_path;
  std::string mode = "replication";
  ModelFlags compare_model;
  SolverFlags compare_flags;
  compare_flags.algo = "exact";
  std::string compare_format = "text";
  compare->add_option("instance", compare_path, "Instance file")->required();
  compare->add_option("--mode", mode, "What to compare")
      ->check(CLI::IsMember({"replication", "placement"}))
      ->capture_default_str();
  compare_model.add_to(*compare);
  compare_flags.add_to(*compare, defaults, {"exact", "brute", "sa"});
  compare->add_option("--format", compare_format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* exp = app.add_subcommand("export", "Export the MIP model");
  std::string export_path;
  std::string export_format = "mps";
  ModelFlags export_model_flags;
  std::string export_output;
  bool symmetry = false;
  exp->add_option("instance", export_path, "Instance file")->required();
  exp->add_option("--format", export_format, "mps or lp")
      ->capture_default_str();
  export_model_flags.add_to(*exp);
  exp->add_option("-o,--output", export_output, "Output file (default stdout)");
  exp->add_flag("--symmetry-breaking", symmetry,
                "Add site-ordering constraints");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*gen) {
    return cmd_gen(preset, params, gen_model, defaults, gen_output);
  }
  if (*solve) {
    return cmd_solve(solve_path, solve_model, solve_flags, defaults,
                     solve_output, trace, solve_format == "structured");
  }
  if (*eval) {
    return cmd_eval(eval_instance, eval_partitioning, eval_model, defaults,
                    eval_format == "structured");
  }
  if (*compare) {
    if (mode == "replication" && compare_flags.algo == "sa") {
      throw UsageError("replication mode needs --algo exact or brute");
    }
    return cmd_compare(compare_path, mode, compare_model, compare_flags,
                       defaults, compare_format == "structured");
  }
  return cmd_export(export_path, export_format, export_model_flags, defaults,
                    export_output, symmetry);
}

}  // namespace
}  // namespace vpart::cli

int main(int argc, char** argv) {
  using namespace vpart;
  try {
    return cli::run(argc, argv);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const SizeError& e) {
    std::cerr << "too large: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitInvalid;
  } catch (const FeasibilityError& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitInvalid;
  } catch (const FormatError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return cli::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInvalid;
  }
}
