// Benchmark inputs: seeded random instances and a TPC-C encoding.

#ifndef VPART_INSTANCE_GEN_H_
#define VPART_INSTANCE_GEN_H_

#include <cstdint>
#include <vector>

#include "vpart/instance.h"

namespace vpart {

struct GenParams {
  int transaction_count = 20;
  int table_count = 20;
  int max_queries_per_transaction = 3;     // A
  double update_percent = 10;              // B
  int max_attributes_per_table = 15;       // C
  int max_table_refs_per_query = 5;        // D
  int max_attribute_refs_per_query = 15;   // E
  std::vector<int64_t> allowed_widths{4, 8};  // F
  uint64_t seed = 1;

  int site_count = 1;
  double p = 8;
  double lambda = 0.1;

  std::vector<Violation> validate() const;
};

// Every count is drawn uniformly from [1, bound]. Throws std::invalid_argument
// for invalid parameters.
Instance generate(const GenParams& params);

// TPC-C v5.10.1: 9 tables, 92 attributes, 5 transactions, one site.
Instance tpcc();

}  // namespace vpart

#endif  // VPART_INSTANCE_GEN_H_
