#include "vpart/instance.h"

#include <cmath>
#include <set>
#include <sstream>

namespace vpart {

std::string_view to_string(QueryKind kind) {
  return kind == QueryKind::kRead ? "read" : "write";
}

std::string Instance::qualified_name(int attribute_id) const {
  const Attribute& a = attributes.at(attribute_id);
  return tables.at(a.table_id).name + "." + a.name;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error("invalid instance:\n" +
                         format_violations(violations)),
      violations_(std::move(violations)) {}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << "  [" << v.code << "] " << v.message << "\n";
  }
  return out.str();
}

namespace {

class ViolationSink {
 public:
  void add(std::string code, std::string message) {
    out_.push_back({std::move(code), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool in_range(int id, std::size_t size) {
  return id >= 0 && static_cast<std::size_t>(id) < size;
}

void validate_config(const Instance& in, ViolationSink& sink) {
  if (in.site_count < 1 || in.site_count > kMaxSites) {
    sink.add("sites", "site count must be in [1, 64], got " +
                          std::to_string(in.site_count));
  }
  if (!(in.p >= 0) || !std::isfinite(in.p)) {
    sink.add("penalty", "network penalty p must be a nonnegative number");
  }
  if (!(in.lambda >= 0 && in.lambda <= 1)) {
    sink.add("lambda", "lambda must lie in [0, 1]");
  }
  if (in.p_latency && (!(*in.p_latency >= 0) || !std::isfinite(*in.p_latency))) {
    sink.add("latency", "latency penalty must be a nonnegative number");
  }
}

void validate_schema(const Instance& in, ViolationSink& sink) {
  std::set<std::string> table_names;
  std::vector<int> owner(in.attributes.size(), -1);
  for (std::size_t i = 0; i < in.tables.size(); ++i) {
    const Table& t = in.tables[i];
    if (t.id != static_cast<int>(i)) {
      sink.add("table_id", "table '" + t.name + "' has id " +
                               std::to_string(t.id) + ", expected " +
                               std::to_string(i));
    }
    if (!table_names.insert(t.name).second) {
      sink.add("duplicate_name", "duplicate table name '" + t.name + "'");
    }
    if (t.attribute_ids.empty()) {
      sink.add("empty_table", "table '" + t.name + "' has no attributes");
    }
    std::set<std::string> column_names;
    for (int a : t.attribute_ids) {
      if (!in_range(a, in.attributes.size())) {
        sink.add("unknown_attribute", "table '" + t.name +
                                          "' lists unknown attribute id " +
                                          std::to_string(a));
        continue;
      }
      if (owner[a] != -1) {
        sink.add("attribute_in_two_tables",
                 "attribute '" + in.attributes[a].name +
                     "' is listed by more than one table");
        continue;
      }
      owner[a] = static_cast<int>(i);
      if (!column_names.insert(in.attributes[a].name).second) {
        sink.add("duplicate_name", "duplicate attribute name '" +
                                       in.attributes[a].name + "' in table '" +
                                       t.name + "'");
      }
    }
  }
  for (std::size_t a = 0; a < in.attributes.size(); ++a) {
    const Attribute& attr = in.attributes[a];
    if (attr.id != static_cast<int>(a)) {
      sink.add("attribute_id", "attribute '" + attr.name + "' has id " +
                                   std::to_string(attr.id) + ", expected " +
                                   std::to_string(a));
    }
    if (attr.width < 1) {
      sink.add("width", "width must be >=1 for attribute '" + attr.name +
                            "', got " + std::to_string(attr.width));
    }
    if (!in_range(attr.table_id, in.tables.size())) {
      sink.add("unknown_table", "attribute '" + attr.name +
                                    "' refers to unknown table id " +
                                    std::to_string(attr.table_id));
    } else if (owner[a] == -1) {
      sink.add("orphan_attribute", "attribute '" + attr.name +
                                       "' is not listed by its table");
    } else if (owner[a] != attr.table_id) {
      sink.add("attribute_in_two_tables",
               "attribute '" + attr.name + "' claims table " +
                   std::to_string(attr.table_id) + " but is listed by table " +
                   std::to_string(owner[a]));
    }
  }
}

void validate_workload(const Instance& in, ViolationSink& sink) {
  for (std::size_t q = 0; q < in.queries.size(); ++q) {
    const Query& query = in.queries[q];
    const std::string label = "query '" + query.name + "'";
    if (query.id != static_cast<int>(q)) {
      sink.add("query_id", label + " has id " + std::to_string(query.id) +
                               ", expected " + std::to_string(q));
    }
    if (!(query.frequency >= 0) || !std::isfinite(query.frequency)) {
      sink.add("frequency", label + " needs a nonnegative frequency");
    }
    if (query.accessed_attributes.empty()) {
      sink.add("empty_query", label + " accesses no attributes");
    }
    for (const auto& [table, rows] : query.rows_per_table) {
      if (!in_range(table, in.tables.size())) {
        sink.add("unknown_table", label + " has rows for unknown table id " +
                                      std::to_string(table));
      } else if (!(rows >= 0) || !std::isfinite(rows)) {
        sink.add("rows", label + " needs nonnegative row counts");
      }
    }
    std::set<int> seen;
    for (int a : query.accessed_attributes) {
      if (!in_range(a, in.attributes.size())) {
        sink.add("unknown_attribute", label + " references unknown attribute "
                                              "id " + std::to_string(a));
        continue;
      }
      if (!seen.insert(a).second) {
        sink.add("duplicate_attribute",
                 label + " lists attribute '" + in.attributes[a].name +
                     "' twice");
        continue;
      }
      const int table = in.attributes[a].table_id;
      auto it = query.rows_per_table.find(table);
      if (in_range(table, in.tables.size()) &&
          (it == query.rows_per_table.end() || !(it->second > 0))) {
        sink.add("missing_rows", label + " accesses '" +
                                     in.qualified_name(a) +
                                     "' without a positive row count for "
                                     "its table");
      }
    }
  }

  std::vector<int> owner(in.queries.size(), -1);
  std::set<std::string> names;
  for (std::size_t t = 0; t < in.transactions.size(); ++t) {
    const Transaction& tx = in.transactions[t];
    const std::string label = "transaction '" + tx.name + "'";
    if (tx.id != static_cast<int>(t)) {
      sink.add("transaction_id", label + " has id " + std::to_string(tx.id) +
                                     ", expected " + std::to_string(t));
    }
    if (!names.insert(tx.name).second) {
      sink.add("duplicate_name", "duplicate transaction name '" + tx.name +
                                     "'");
    }
    if (tx.query_ids.empty()) {
      sink.add("empty_transaction", label + " has no queries");
    }
    for (int q : tx.query_ids) {
      if (!in_range(q, in.queries.size())) {
        sink.add("unknown_query", label + " references unknown query id " +
                                      std::to_string(q));
      } else if (owner[q] != -1) {
        sink.add("query_in_two_transactions",
                 "query '" + in.queries[q].name +
                     "' belongs to more than one transaction");
      } else {
        owner[q] = static_cast<int>(t);
      }
    }
  }
  for (std::size_t q = 0; q < in.queries.size(); ++q) {
    if (owner[q] == -1) {
      sink.add("orphan_query", "query '" + in.queries[q].name +
                                   "' belongs to no transaction");
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Instance& instance) {
  ViolationSink sink;
  validate_config(instance, sink);
  validate_schema(instance, sink);
  validate_workload(instance, sink);
  return sink.take();
}

std::vector<Violation> lint(const Instance& instance) {
  std::vector<Violation> out;
  if (!validate(instance).empty()) return out;
  for (const Transaction& tx : instance.transactions) {
    std::set<int> read_tables;
    for (int q : tx.query_ids) {
      const Query& query = instance.queries[q];
      if (query.is_write()) continue;
      for (int a : query.accessed_attributes) {
        read_tables.insert(instance.attributes[a].table_id);
      }
    }
    for (int q : tx.query_ids) {
      const Query& query = instance.queries[q];
      if (!query.is_write()) continue;
      for (const auto& [table, rows] : query.rows_per_table) {
        if (!read_tables.contains(table)) {
          out.push_back({"unpaired_write",
                         "write query '" + query.name + "' in transaction '" +
                             tx.name + "' writes table '" +
                             instance.tables[table].name +
                             "' that no read query of the transaction touches"});
        }
      }
    }
  }
  return out;
}

DerivedCoefficients derive(const Instance& instance) {
  if (auto violations = validate(instance); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  const int na = instance.attribute_count();
  const int nq = instance.query_count();
  const int nt = instance.transaction_count();
  const double p = instance.p;

  DerivedCoefficients d;
  d.alpha = Matrix<uint8_t>(na, nq);
  d.beta = Matrix<uint8_t>(na, nq);
  d.gamma = Matrix<uint8_t>(nq, nt);
  d.delta.assign(nq, 0);
  d.phi = Matrix<uint8_t>(na, nt);
  d.w = Matrix<double>(na, nq);
  d.c1 = Matrix<double>(na, nt);
  d.c2.assign(na, 0.0);
  d.c3 = Matrix<double>(na, nt);
  d.c4.assign(na, 0.0);
  d.transaction_of.assign(nq, -1);
  d.reads_of_transaction.assign(nt, {});
  d.touched_by_query.assign(nq, {});

  for (const Transaction& tx : instance.transactions) {
    for (int q : tx.query_ids) {
      d.gamma(q, tx.id) = 1;
      d.transaction_of[q] = tx.id;
    }
  }

  for (const Query& query : instance.queries) {
    const int q = query.id;
    d.delta[q] = query.is_write() ? 1 : 0;
    for (int a : query.accessed_attributes) d.alpha(a, q) = 1;
    for (const auto& [table, rows] : query.rows_per_table) {
      if (!(rows > 0)) continue;
      for (int a : instance.tables[table].attribute_ids) {
        d.beta(a, q) = 1;
        d.w(a, q) = static_cast<double>(instance.attributes[a].width) *
                    query.frequency * rows;
        d.touched_by_query[q].push_back(a);
      }
    }
    if (!query.is_write()) {
      const int t = d.transaction_of[q];
      for (int a : query.accessed_attributes) d.phi(a, t) = 1;
    }
  }

  for (int a = 0; a < na; ++a) {
    for (int t = 0; t < nt; ++t) {
      if (d.phi(a, t)) d.reads_of_transaction[t].push_back(a);
    }
  }

  for (const Query& query : instance.queries) {
    const int q = query.id;
    const int t = d.transaction_of[q];
    for (int a : d.touched_by_query[q]) {
      const double w = d.w(a, q);
      const double alpha = d.alpha(a, q);
      if (query.is_write()) {
        d.c1(a, t) -= p * alpha * w;
        d.c2[a] += w * (1.0 + p * alpha);
        d.c4[a] += w;
      } else {
        d.c1(a, t) += w;
        d.c3(a, t) += w;
      }
    }
  }
  return d;
}

InstanceBuilder& InstanceBuilder::sites(int site_count) {
  instance_.site_count = site_count;
  return *this;
}

InstanceBuilder& InstanceBuilder::penalty(double p) {
  instance_.p = p;
  return *this;
}

InstanceBuilder& InstanceBuilder::lambda(double lambda) {
  instance_.lambda = lambda;
  return *this;
}

InstanceBuilder& InstanceBuilder::latency_penalty(
    std::optional<double> p_latency) {
  instance_.p_latency = p_latency;
  return *this;
}

int InstanceBuilder::add_table(
    std::string name,
    const std::vector<std::pair<std::string, int64_t>>& columns) {
  Table table;
  table.id = instance_.table_count();
  table.name = std::move(name);
  for (const auto& [column, width] : columns) {
    Attribute attr;
    attr.id = instance_.attribute_count();
    attr.table_id = table.id;
    attr.name = column;
    attr.width = width;
    table.attribute_ids.push_back(attr.id);
    instance_.attributes.push_back(std::move(attr));
  }
  instance_.tables.push_back(std::move(table));
  return instance_.tables.back().id;
}

int InstanceBuilder::add_transaction(std::string name) {
  Transaction tx;
  tx.id = instance_.transaction_count();
  tx.name = std::move(name);
  instance_.transactions.push_back(std::move(tx));
  return instance_.transactions.back().id;
}

int InstanceBuilder::add_query(int transaction_id, std::string name,
                               QueryKind kind, double frequency,
                               const std::map<std::string, double>& rows,
                               const std::vector<std::string>& attributes) {
  if (!in_range(transaction_id, instance_.transactions.size())) {
    throw std::invalid_argument("unknown transaction id " +
                                std::to_string(transaction_id));
  }
  Query query;
  query.id = instance_.query_count();
  query.name = std::move(name);
  query.kind = kind;
  query.frequency = frequency;
  for (const auto& [table, n] : rows) query.rows_per_table[table_id(table)] = n;
  for (const std::string& ref : attributes) {
    query.accessed_attributes.push_back(attribute_id(ref));
  }
  instance_.transactions[transaction_id].query_ids.push_back(query.id);
  instance_.queries.push_back(std::move(query));
  return instance_.queries.back().id;
}

int InstanceBuilder::table_id(std::string_view name) const {
  for (const Table& t : instance_.tables) {
    if (t.name == name) return t.id;
  }
  throw std::invalid_argument("unknown table '" + std::string(name) + "'");
}

int InstanceBuilder::attribute_id(std::string_view qualified) const {
  const auto dot = qualified.find('.');
  if (dot == std::string_view::npos) {
    throw std::invalid_argument("attribute reference '" +
                                std::string(qualified) +
                                "' must have the form Table.attr");
  }
  const Table& table = instance_.tables[table_id(qualified.substr(0, dot))];
  const std::string_view column = qualified.substr(dot + 1);
  for (int a : table.attribute_ids) {
    if (instance_.attributes[a].name == column) return a;
  }
  throw std::invalid_argument("unknown attribute '" + std::string(qualified) +
                              "'");
}

Instance InstanceBuilder::build() const {
  if (auto violations = validate(instance_); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return instance_;
}

}  // namespace vpart
