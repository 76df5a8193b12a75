#include "vpart/io.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vpart {
namespace {

using nlohmann::json;

void require_keys(const json& object, std::string_view where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!object.is_object()) {
    throw FormatError(std::string(where) + " must be an object");
  }
  std::set<std::string> known;
  for (const char* key : required) {
    known.insert(key);
    if (!object.contains(key)) {
      throw FormatError(std::string(where) + " is missing key '" + key + "'");
    }
  }
  for (const char* key : optional) known.insert(key);
  for (const auto& item : object.items()) {
    if (!known.count(item.key())) {
      throw FormatError(std::string(where) + " has unknown key '" +
                        item.key() + "'");
    }
  }
}

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
}

json instance_document(const Instance& instance) {
  json doc;
  doc["tables"] = json::array();
  for (const Table& table : instance.tables) {
    json columns = json::array();
    for (int a : table.attribute_ids) {
      columns.push_back({{"name", instance.attributes[a].name},
                         {"width", instance.attributes[a].width}});
    }
    doc["tables"].push_back({{"name", table.name}, {"attributes", columns}});
  }
  doc["transactions"] = json::array();
  for (const Transaction& tx : instance.transactions) {
    json queries = json::array();
    for (int q : tx.query_ids) {
      const Query& query = instance.queries[q];
      json rows = json::object();
      for (const auto& [table, n] : query.rows_per_table) {
        rows[instance.tables[table].name] = n;
      }
      json attributes = json::array();
      for (int a : query.accessed_attributes) {
        attributes.push_back(instance.qualified_name(a));
      }
      queries.push_back({{"name", query.name},
                         {"kind", std::string(to_string(query.kind))},
                         {"frequency", query.frequency},
                         {"rows", rows},
                         {"attributes", attributes}});
    }
    doc["transactions"].push_back({{"name", tx.name}, {"queries", queries}});
  }
  json config = {{"sites", instance.site_count},
                 {"p", instance.p},
                 {"lambda", instance.lambda}};
  if (instance.p_latency) config["p_latency"] = *instance.p_latency;
  doc["config"] = config;
  return doc;
}

}  // namespace

std::string write_instance(const Instance& instance) {
  return instance_document(instance).dump(2) + "\n";
}

Instance read_instance(std::string_view text) {
  const json doc = parse(text);
  InstanceBuilder builder;
  try {
    require_keys(doc, "instance", {"tables", "transactions", "config"});
    const json& config = doc.at("config");
    require_keys(config, "config", {"sites", "p", "lambda"}, {"p_latency"});
    builder.sites(config.at("sites").get<int>())
        .penalty(config.at("p").get<double>())
        .lambda(config.at("lambda").get<double>());
    if (config.contains("p_latency")) {
      builder.latency_penalty(config.at("p_latency").get<double>());
    }
    for (const json& table : doc.at("tables")) {
      require_keys(table, "table", {"name", "attributes"});
      std::vector<std::pair<std::string, int64_t>> columns;
      for (const json& column : table.at("attributes")) {
        require_keys(column, "attribute", {"name", "width"});
        columns.emplace_back(column.at("name").get<std::string>(),
                             column.at("width").get<int64_t>());
      }
      builder.add_table(table.at("name").get<std::string>(), columns);
    }
    for (const json& tx : doc.at("transactions")) {
      require_keys(tx, "transaction", {"name", "queries"});
      const int t = builder.add_transaction(tx.at("name").get<std::string>());
      for (const json& query : tx.at("queries")) {
        require_keys(query, "query",
                     {"name", "kind", "frequency", "rows", "attributes"});
        const std::string kind = query.at("kind").get<std::string>();
        if (kind != "read" && kind != "write") {
          throw FormatError("query kind must be 'read' or 'write', got '" +
                            kind + "'");
        }
        builder.add_query(
            t, query.at("name").get<std::string>(),
            kind == "read" ? QueryKind::kRead : QueryKind::kWrite,
            query.at("frequency").get<double>(),
            query.at("rows").get<std::map<std::string, double>>(),
            query.at("attributes").get<std::vector<std::string>>());
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad instance document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return builder.build();
}

std::string write_partitioning(const Instance& instance,
                               const Partitioning& part) {
  json x = json::object();
  for (int t = 0; t < instance.transaction_count(); ++t) {
    x[instance.transactions[t].name] = part.x.at(t);
  }
  json y = json::object();
  for (int a = 0; a < instance.attribute_count(); ++a) {
    y[instance.qualified_name(a)] = part.y.at(a).sites();
  }
  return json{{"x", x}, {"y", y}}.dump(2) + "\n";
}

Partitioning read_partitioning(const Instance& instance,
                               std::string_view text) {
  const json doc = parse(text);
  Partitioning part;
  part.x.assign(instance.transaction_count(), -1);
  part.y.assign(instance.attribute_count(), SiteSet{});
  std::map<std::string, int> transaction_ids;
  for (const Transaction& tx : instance.transactions) {
    transaction_ids[tx.name] = tx.id;
  }
  std::map<std::string, int> attribute_ids;
  for (int a = 0; a < instance.attribute_count(); ++a) {
    attribute_ids[instance.qualified_name(a)] = a;
  }
  try {
    require_keys(doc, "partitioning", {"x", "y"});
    for (const auto& item : doc.at("x").items()) {
      auto it = transaction_ids.find(item.key());
      if (it == transaction_ids.end()) {
        throw FormatError("unknown transaction '" + item.key() + "'");
      }
      part.x[it->second] = item.value().get<int>();
    }
    for (const auto& item : doc.at("y").items()) {
      auto it = attribute_ids.find(item.key());
      if (it == attribute_ids.end()) {
        throw FormatError("unknown attribute '" + item.key() + "'");
      }
      for (int s : item.value().get<std::vector<int>>()) {
        if (s < 0 || s >= kMaxSites) {
          throw FormatError("site " + std::to_string(s) + " of '" +
                            item.key() + "' is out of range");
        }
        part.y[it->second].insert(s);
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad partitioning document: ") + e.what());
  }
  return part;
}

std::string fingerprint(const Instance& instance) {
  const std::string canonical = instance_document(instance).dump();
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace vpart
