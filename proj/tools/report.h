#ifndef VPART_TOOLS_REPORT_H_
#define VPART_TOOLS_REPORT_H_

#include <ostream>
#include <string>

#include "json.hpp"
#include "vpart/instance.h"
#include "vpart/partitioning.h"
#include "vpart/sa_solver.h"
#include "vpart/solve_report.h"

namespace vpart::cli {

// One solver invocation, as echoed in structured output.
struct RunRecord {
  std::string fingerprint;
  std::string solver;
  nlohmann::json config;
  SolveReport report;
  std::string timestamp;  // UTC, ISO 8601
};

std::string utc_timestamp();

nlohmann::json cost_to_json(const CostBreakdown& cost);
nlohmann::json record_to_json(const RunRecord& record);

// Aligned table of a cost breakdown: raw values and 10^5 / 10^6 scalings.
void print_cost(std::ostream& out, const CostBreakdown& cost);
void print_record(std::ostream& out, const RunRecord& record);
void print_trace(std::ostream& out, const SaTrace& trace);

}  // namespace vpart::cli

#endif  // VPART_TOOLS_REPORT_H_
