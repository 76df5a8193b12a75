// Problem input for the vertical partitioning advisor: schema, workload,
// statistics and cost parameters, plus the static coefficients derived from
// them.

#ifndef VPART_INSTANCE_H_
#define VPART_INSTANCE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vpart/matrix.h"

namespace vpart {

enum class QueryKind { kRead, kWrite };

std::string_view to_string(QueryKind kind);

struct Attribute {
  int id = 0;
  int table_id = 0;
  std::string name;
  // Average width in bytes.
  int64_t width = 1;

  bool operator==(const Attribute&) const = default;
};

struct Table {
  int id = 0;
  std::string name;
  std::vector<int> attribute_ids;

  bool operator==(const Table&) const = default;
};

struct Query {
  int id = 0;
  std::string name;
  QueryKind kind = QueryKind::kRead;
  double frequency = 1.0;
  // Attributes read (kRead) or actually written (kWrite) by the query.
  std::vector<int> accessed_attributes;
  // Average number of rows touched per table, keyed by table id.
  std::map<int, double> rows_per_table;

  bool is_write() const { return kind == QueryKind::kWrite; }
  bool operator==(const Query&) const = default;
};

struct Transaction {
  int id = 0;
  std::string name;
  std::vector<int> query_ids;

  bool operator==(const Transaction&) const = default;
};

struct Instance {
  std::vector<Table> tables;
  std::vector<Attribute> attributes;
  std::vector<Query> queries;
  std::vector<Transaction> transactions;

  int site_count = 1;
  // Network penalty: cost of one transferred byte relative to a local one.
  double p = 8.0;
  // Weight of total cost against the maximum site load.
  double lambda = 0.1;
  std::optional<double> p_latency;

  int attribute_count() const { return static_cast<int>(attributes.size()); }
  int query_count() const { return static_cast<int>(queries.size()); }
  int transaction_count() const {
    return static_cast<int>(transactions.size());
  }
  int table_count() const { return static_cast<int>(tables.size()); }

  // "Table.attribute"
  std::string qualified_name(int attribute_id) const;

  bool operator==(const Instance&) const = default;
};

// Maximum number of sites; site sets are stored as 64-bit masks.
inline constexpr int kMaxSites = 64;

struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Thrown when an operation receives an instance that fails validate().
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Thrown when a precondition stated by an operation's contract is broken.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Structural checks. An empty result means the instance is valid.
std::vector<Violation> validate(const Instance& instance);

// Non-fatal modelling warnings, e.g. a write query whose transaction never
// reads the table it writes (UPDATEs are expected as read + write pairs).
std::vector<Violation> lint(const Instance& instance);

std::string format_violations(const std::vector<Violation>& violations);

// Static flag matrices and cost coefficients of the cost model. Attribute
// rows are indexed by attribute id, query/transaction columns by their ids.
struct DerivedCoefficients {
  Matrix<uint8_t> alpha;  // attribute x query: attribute itself accessed
  Matrix<uint8_t> beta;   // attribute x query: attribute's table accessed
  Matrix<uint8_t> gamma;  // query x transaction
  std::vector<uint8_t> delta;  // per query: write query
  Matrix<uint8_t> phi;    // attribute x transaction: read by the transaction

  Matrix<double> w;   // attribute x query: bytes, w_a * f_q * n_{a,q}
  Matrix<double> c1;  // attribute x transaction
  std::vector<double> c2;
  Matrix<double> c3;  // attribute x transaction
  std::vector<double> c4;

  std::vector<int> transaction_of;  // per query
  // Attributes with phi = 1, per transaction.
  std::vector<std::vector<int>> reads_of_transaction;
  // Attributes with beta = 1, per query.
  std::vector<std::vector<int>> touched_by_query;
};

// Throws ValidationError for invalid instances.
DerivedCoefficients derive(const Instance& instance);

// Convenience for assembling instances by name, used by tests, generators and
// the file reader. Ids are assigned densely in insertion order.
class InstanceBuilder {
 public:
  InstanceBuilder& sites(int site_count);
  InstanceBuilder& penalty(double p);
  InstanceBuilder& lambda(double lambda);
  InstanceBuilder& latency_penalty(std::optional<double> p_latency);

  int add_table(std::string name,
                const std::vector<std::pair<std::string, int64_t>>& columns);
  int add_transaction(std::string name);
  // Attributes are "Table.attr" references; rows are keyed by table name.
  int add_query(int transaction_id, std::string name, QueryKind kind,
                double frequency, const std::map<std::string, double>& rows,
                const std::vector<std::string>& attributes);

  int attribute_id(std::string_view qualified) const;
  int table_id(std::string_view name) const;

  const Instance& peek() const { return instance_; }
  // Throws ValidationError if the result is invalid.
  Instance build() const;
  Instance build_unchecked() const { return instance_; }

 private:
  Instance instance_;
};

}  // namespace vpart

#endif  // VPART_INSTANCE_H_
