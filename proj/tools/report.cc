#include "report.h"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace vpart::cli {
namespace {

std::string format(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), pattern, value);
  return buffer;
}

void print_row(std::ostream& out, const std::string& label, double value) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "  %-20s %16.2f %12.5f %12.6f\n",
                label.c_str(), value, value / 1e5, value / 1e6);
  out << buffer;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

nlohmann::json cost_to_json(const CostBreakdown& cost) {
  nlohmann::json out = {{"read_access", cost.read_access},
                        {"write_access", cost.write_access},
                        {"transfer", cost.transfer},
                        {"objective", cost.objective},
                        {"site_loads", cost.site_loads},
                        {"max_load", cost.max_load},
                        {"score", cost.score}};
  if (cost.latency) out["latency"] = *cost.latency;
  return out;
}

nlohmann::json record_to_json(const RunRecord& record) {
  const SolveReport& r = record.report;
  nlohmann::json report = {{"status", std::string(to_string(r.status))},
                           {"objective", r.objective},
                           {"score", r.score},
                           {"wall_seconds", r.wall_seconds},
                           {"nodes", r.nodes}};
  report["gap"] = r.gap ? nlohmann::json(*r.gap) : nlohmann::json(nullptr);
  if (r.cost) report["cost"] = cost_to_json(*r.cost);
  return {{"fingerprint", record.fingerprint},
          {"solver", record.solver},
          {"config", record.config},
          {"report", report},
          {"timestamp", record.timestamp}};
}

void print_cost(std::ostream& out, const CostBreakdown& cost) {
  char header[128];
  std::snprintf(header, sizeof(header), "  %-20s %16s %12s %12s\n", "", "raw",
                "x10^5", "x10^6");
  out << header;
  print_row(out, "read access A_R", cost.read_access);
  print_row(out, "write access A_W", cost.write_access);
  print_row(out, "transfer B", cost.transfer);
  if (cost.latency) print_row(out, "latency", *cost.latency);
  print_row(out, "objective", cost.objective);
  print_row(out, "max load m", cost.max_load);
  print_row(out, "score", cost.score);
  for (std::size_t s = 0; s < cost.site_loads.size(); ++s) {
    print_row(out, "load site " + std::to_string(s), cost.site_loads[s]);
  }
}

void print_record(std::ostream& out, const RunRecord& record) {
  const SolveReport& r = record.report;
  out << "instance " << record.fingerprint << "\n";
  out << "solver   " << record.solver << "\n";
  out << "status   " << to_string(r.status);
  if (r.gap) out << ", gap " << format("%.4f%%", 100 * *r.gap);
  out << ", nodes " << r.nodes << ", " << format("%.3f", r.wall_seconds)
      << " s\n";
  if (r.cost) print_cost(out, *r.cost);
}

void print_trace(std::ostream& out, const SaTrace& trace) {
  char line[160];
  std::snprintf(line, sizeof(line), "%6s %16s %16s %16s %9s\n", "loop",
                "temperature", "best", "current", "accepted");
  out << line;
  for (const SaTraceRecord& r : trace.records) {
    std::snprintf(line, sizeof(line), "%6d %16.6g %16.2f %16.2f %9d\n",
                  r.outer_loop, r.temperature, r.best_score, r.current_score,
                  r.accepted);
    out << line;
  }
}

}  // namespace vpart::cli
