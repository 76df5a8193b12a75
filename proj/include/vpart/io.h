// Text formats for instances and partitionings (JSON documents).
//
// Instance:
//   {"tables": [{"name", "attributes": [{"name", "width"}]}],
//    "transactions": [{"name", "queries": [{"name", "kind", "frequency",
//                                           "rows": {table: n},
//                                           "attributes": ["T.a"]}]}],
//    "config": {"sites", "p", "lambda", "p_latency"?}}
// Partitioning:
//   {"x": {transaction: site}, "y": {"T.a": [sites]}}

#ifndef VPART_IO_H_
#define VPART_IO_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "vpart/instance.h"
#include "vpart/partitioning.h"

namespace vpart {

// Malformed document: bad syntax, wrong types, unknown or missing keys.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string write_instance(const Instance& instance);
// Throws FormatError, or ValidationError for a well-formed invalid instance.
Instance read_instance(std::string_view text);

std::string write_partitioning(const Instance& instance,
                               const Partitioning& partitioning);
// Transactions missing from the document get site -1 and attributes missing
// from it get no replicas, so check_feasible reports them.
Partitioning read_partitioning(const Instance& instance, std::string_view text);

// Hex FNV-1a hash of the canonical instance document.
std::string fingerprint(const Instance& instance);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace vpart

#endif  // VPART_IO_H_
