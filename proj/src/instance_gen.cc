#include "vpart/instance_gen.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace vpart {

std::vector<Violation> GenParams::validate() const {
  std::vector<Violation> out;
  auto at_least_one = [&](int value, const char* name) {
    if (value < 1) {
      out.push_back({"gen_param", std::string(name) + " must be >= 1, got " +
                                      std::to_string(value)});
    }
  };
  at_least_one(transaction_count, "transaction count");
  at_least_one(table_count, "table count");
  at_least_one(max_queries_per_transaction, "max queries per transaction");
  at_least_one(max_attributes_per_table, "max attributes per table");
  at_least_one(max_table_refs_per_query, "max table refs per query");
  at_least_one(max_attribute_refs_per_query, "max attribute refs per query");
  at_least_one(site_count, "site count");
  if (!(update_percent >= 0 && update_percent <= 100)) {
    out.push_back({"gen_param", "update percent must lie in [0, 100]"});
  }
  if (allowed_widths.empty()) {
    out.push_back({"gen_param", "allowed widths must not be empty"});
  }
  for (int64_t w : allowed_widths) {
    if (w < 1) out.push_back({"gen_param", "widths must be >= 1"});
  }
  return out;
}

Instance generate(const GenParams& params) {
  if (auto v = params.validate(); !v.empty()) {
    throw std::invalid_argument(format_violations(v));
  }
  std::mt19937_64 rng(params.seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  InstanceBuilder builder;
  builder.sites(params.site_count).penalty(params.p).lambda(params.lambda);

  std::vector<std::string> table_names;
  std::vector<std::vector<std::string>> columns_of;
  for (int i = 0; i < params.table_count; ++i) {
    const int count = uniform(1, params.max_attributes_per_table);
    std::vector<std::pair<std::string, int64_t>> columns;
    std::vector<std::string> refs;
    for (int c = 0; c < count; ++c) {
      const int64_t width = params.allowed_widths[uniform(
          0, static_cast<int>(params.allowed_widths.size()) - 1)];
      columns.emplace_back("a" + std::to_string(c), width);
      refs.push_back("R" + std::to_string(i) + ".a" + std::to_string(c));
    }
    table_names.push_back("R" + std::to_string(i));
    builder.add_table(table_names.back(), columns);
    columns_of.push_back(std::move(refs));
  }

  std::bernoulli_distribution is_write(params.update_percent / 100.0);
  for (int t = 0; t < params.transaction_count; ++t) {
    const int tx = builder.add_transaction("t" + std::to_string(t));
    const int queries = uniform(1, params.max_queries_per_transaction);
    for (int q = 0; q < queries; ++q) {
      const QueryKind kind = is_write(rng) ? QueryKind::kWrite
                                           : QueryKind::kRead;
      const int tables = std::min(uniform(1, params.max_table_refs_per_query),
                                  params.table_count);
      std::vector<int> order(params.table_count);
      std::iota(order.begin(), order.end(), 0);
      for (int i = 0; i < tables; ++i) {
        std::swap(order[i], order[uniform(i, params.table_count - 1)]);
      }
      // Candidate attributes: (table, column) over the chosen tables.
      std::vector<std::pair<int, int>> pool;
      for (int i = 0; i < tables; ++i) {
        for (int c = 0; c < static_cast<int>(columns_of[order[i]].size());
             ++c) {
          pool.emplace_back(order[i], c);
        }
      }
      const int refs =
          std::min(uniform(1, params.max_attribute_refs_per_query),
                   static_cast<int>(pool.size()));
      for (int i = 0; i < refs; ++i) {
        std::swap(pool[i],
                  pool[uniform(i, static_cast<int>(pool.size()) - 1)]);
      }
      pool.resize(refs);
      std::sort(pool.begin(), pool.end());

      // Every chosen table is touched, even if none of its columns is named.
      std::map<std::string, double> rows;
      for (int i = 0; i < tables; ++i) {
        rows[table_names[order[i]]] = uniform(1, 10);
      }
      std::vector<std::string> attributes;
      for (const auto& [table, column] : pool) {
        attributes.push_back(columns_of[table][column]);
      }
      builder.add_query(tx,
                        "t" + std::to_string(t) + "_q" + std::to_string(q),
                        kind, 1.0, rows, attributes);
    }
  }
  return builder.build();
}

namespace {

// Column widths from the TPC-C datatypes: identifiers 4 bytes, numeric(n)
// ceil(n / 2) + 1, datetime 8, fixed text(n) n, variable text(n)
// ceil((n + 1) / 2).
constexpr int64_t kId = 4;
constexpr int64_t kDate = 8;
constexpr int64_t numeric(int digits) { return (digits + 1) / 2 + 1; }
constexpr int64_t fixed_text(int n) { return n; }
constexpr int64_t var_text(int n) { return (n + 2) / 2; }

using Columns = std::vector<std::pair<std::string, int64_t>>;

std::vector<std::string> refs(const std::string& table,
                              const std::vector<std::string>& columns) {
  std::vector<std::string> out;
  for (const std::string& c : columns) out.push_back(table + "." + c);
  return out;
}

std::vector<std::string> all_columns(const Instance& instance,
                                     const std::string& table) {
  std::vector<std::string> out;
  for (const Table& t : instance.tables) {
    if (t.name != table) continue;
    for (int a : t.attribute_ids) out.push_back(instance.qualified_name(a));
  }
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Instance tpcc() {
  InstanceBuilder b;
  b.add_table("WAREHOUSE",
              Columns{{"W_ID", kId},
                      {"W_NAME", var_text(10)},
                      {"W_STREET_1", var_text(20)},
                      {"W_STREET_2", var_text(20)},
                      {"W_CITY", var_text(20)},
                      {"W_STATE", fixed_text(2)},
                      {"W_ZIP", fixed_text(9)},
                      {"W_TAX", numeric(4)},
                      {"W_YTD", numeric(12)}});
  b.add_table("DISTRICT",
              Columns{{"D_ID", kId},
                      {"D_W_ID", kId},
                      {"D_NAME", var_text(10)},
                      {"D_STREET_1", var_text(20)},
                      {"D_STREET_2", var_text(20)},
                      {"D_CITY", var_text(20)},
                      {"D_STATE", fixed_text(2)},
                      {"D_ZIP", fixed_text(9)},
                      {"D_TAX", numeric(4)},
                      {"D_YTD", numeric(12)},
                      {"D_NEXT_O_ID", kId}});
  b.add_table("CUSTOMER",
              Columns{{"C_ID", kId},
                      {"C_D_ID", kId},
                      {"C_W_ID", kId},
                      {"C_FIRST", var_text(16)},
                      {"C_MIDDLE", fixed_text(2)},
                      {"C_LAST", var_text(16)},
                      {"C_STREET_1", var_text(20)},
                      {"C_STREET_2", var_text(20)},
                      {"C_CITY", var_text(20)},
                      {"C_STATE", fixed_text(2)},
                      {"C_ZIP", fixed_text(9)},
                      {"C_PHONE", fixed_text(16)},
                      {"C_SINCE", kDate},
                      {"C_CREDIT", fixed_text(2)},
                      {"C_CREDIT_LIM", numeric(12)},
                      {"C_DISCOUNT", numeric(4)},
                      {"C_BALANCE", numeric(12)},
                      {"C_YTD_PAYMENT", numeric(12)},
                      {"C_PAYMENT_CNT", numeric(4)},
                      {"C_DELIVERY_CNT", numeric(4)},
                      {"C_DATA", var_text(500)}});
  b.add_table("HISTORY",
              Columns{{"H_C_ID", kId},
                      {"H_C_D_ID", kId},
                      {"H_C_W_ID", kId},
                      {"H_D_ID", kId},
                      {"H_W_ID", kId},
                      {"H_DATE", kDate},
                      {"H_AMOUNT", numeric(6)},
                      {"H_DATA", var_text(24)}});
  b.add_table("NEW_ORDER",
              Columns{{"NO_O_ID", kId}, {"NO_D_ID", kId}, {"NO_W_ID", kId}});
  b.add_table("ORDERS",
              Columns{{"O_ID", kId},
                      {"O_D_ID", kId},
                      {"O_W_ID", kId},
                      {"O_C_ID", kId},
                      {"O_ENTRY_D", kDate},
                      {"O_CARRIER_ID", kId},
                      {"O_OL_CNT", numeric(2)},
                      {"O_ALL_LOCAL", numeric(1)}});
  b.add_table("ORDER_LINE",
              Columns{{"OL_O_ID", kId},
                      {"OL_D_ID", kId},
                      {"OL_W_ID", kId},
                      {"OL_NUMBER", kId},
                      {"OL_I_ID", kId},
                      {"OL_SUPPLY_W_ID", kId},
                      {"OL_DELIVERY_D", kDate},
                      {"OL_QUANTITY", numeric(2)},
                      {"OL_AMOUNT", numeric(6)},
                      {"OL_DIST_INFO", fixed_text(24)}});
  b.add_table("ITEM", Columns{{"I_ID", kId},
                              {"I_IM_ID", kId},
                              {"I_NAME", var_text(24)},
                              {"I_PRICE", numeric(5)},
                              {"I_DATA", var_text(50)}});
  Columns stock{{"S_I_ID", kId}, {"S_W_ID", kId}, {"S_QUANTITY", numeric(4)}};
  for (int i = 1; i <= 10; ++i) {
    stock.emplace_back((i < 10 ? "S_DIST_0" : "S_DIST_") + std::to_string(i),
                       fixed_text(24));
  }
  stock.emplace_back("S_YTD", numeric(8));
  stock.emplace_back("S_ORDER_CNT", numeric(4));
  stock.emplace_back("S_REMOTE_CNT", numeric(4));
  stock.emplace_back("S_DATA", var_text(50));
  b.add_table("STOCK", stock);

  const QueryKind R = QueryKind::kRead;
  const QueryKind W = QueryKind::kWrite;
  const Instance& schema = b.peek();
  const auto c_key = refs("CUSTOMER", {"C_ID", "C_D_ID", "C_W_ID"});
  const auto d_key = refs("DISTRICT", {"D_ID", "D_W_ID"});
  const auto o_key = refs("ORDERS", {"O_ID", "O_D_ID", "O_W_ID"});
  const auto ol_key = refs("ORDER_LINE", {"OL_O_ID", "OL_D_ID", "OL_W_ID"});
  const auto s_key = refs("STOCK", {"S_I_ID", "S_W_ID"});

  const int new_order = b.add_transaction("New-Order");
  b.add_query(new_order, "no_getCustomerWarehouse", R, 1,
              {{"CUSTOMER", 1}, {"WAREHOUSE", 1}},
              concat(concat(c_key, refs("CUSTOMER", {"C_DISCOUNT", "C_LAST",
                                                     "C_CREDIT"})),
                     refs("WAREHOUSE", {"W_ID", "W_TAX"})));
  b.add_query(new_order, "no_getDistrict", R, 1, {{"DISTRICT", 1}},
              concat(d_key, refs("DISTRICT", {"D_NEXT_O_ID", "D_TAX"})));
  b.add_query(new_order, "no_incrementNextOrderId_read", R, 1,
              {{"DISTRICT", 1}},
              concat(d_key, refs("DISTRICT", {"D_NEXT_O_ID"})));
  b.add_query(new_order, "no_incrementNextOrderId_write", W, 1,
              {{"DISTRICT", 1}}, refs("DISTRICT", {"D_NEXT_O_ID"}));
  b.add_query(new_order, "no_insertOrder", W, 1, {{"ORDERS", 1}},
              all_columns(schema, "ORDERS"));
  b.add_query(new_order, "no_insertNewOrder", W, 1, {{"NEW_ORDER", 1}},
              all_columns(schema, "NEW_ORDER"));
  b.add_query(new_order, "no_getItemInfo", R, 1, {{"ITEM", 10}},
              refs("ITEM", {"I_ID", "I_PRICE", "I_NAME", "I_DATA"}));
  std::vector<std::string> stock_info = refs(
      "STOCK", {"S_QUANTITY", "S_DATA", "S_YTD", "S_ORDER_CNT",
                "S_REMOTE_CNT"});
  for (int i = 1; i <= 10; ++i) {
    stock_info.push_back((i < 10 ? "STOCK.S_DIST_0" : "STOCK.S_DIST_") +
                         std::to_string(i));
  }
  b.add_query(new_order, "no_getStockInfo", R, 1, {{"STOCK", 10}},
              concat(s_key, stock_info));
  const auto stock_update = refs(
      "STOCK", {"S_QUANTITY", "S_YTD", "S_ORDER_CNT", "S_REMOTE_CNT"});
  b.add_query(new_order, "no_updateStock_read", R, 1, {{"STOCK", 10}},
              concat(s_key, stock_update));
  b.add_query(new_order, "no_updateStock_write", W, 1, {{"STOCK", 10}},
              stock_update);
  b.add_query(new_order, "no_insertOrderLine", W, 1, {{"ORDER_LINE", 10}},
              all_columns(schema, "ORDER_LINE"));

  const int payment = b.add_transaction("Payment");
  b.add_query(payment, "pay_updateWarehouse_read", R, 1, {{"WAREHOUSE", 1}},
              refs("WAREHOUSE", {"W_ID", "W_YTD"}));
  b.add_query(payment, "pay_updateWarehouse_write", W, 1, {{"WAREHOUSE", 1}},
              refs("WAREHOUSE", {"W_YTD"}));
  b.add_query(payment, "pay_getWarehouse", R, 1, {{"WAREHOUSE", 1}},
              refs("WAREHOUSE", {"W_ID", "W_NAME", "W_STREET_1", "W_STREET_2",
                                 "W_CITY", "W_STATE", "W_ZIP"}));
  b.add_query(payment, "pay_updateDistrict_read", R, 1, {{"DISTRICT", 1}},
              concat(d_key, refs("DISTRICT", {"D_YTD"})));
  b.add_query(payment, "pay_updateDistrict_write", W, 1, {{"DISTRICT", 1}},
              refs("DISTRICT", {"D_YTD"}));
  b.add_query(payment, "pay_getDistrict", R, 1, {{"DISTRICT", 1}},
              concat(d_key, refs("DISTRICT", {"D_NAME", "D_STREET_1",
                                              "D_STREET_2", "D_CITY",
                                              "D_STATE", "D_ZIP"})));
  b.add_query(payment, "pay_countByLastName", R, 1, {{"CUSTOMER", 10}},
              concat(c_key, refs("CUSTOMER", {"C_LAST"})));
  b.add_query(payment, "pay_getCustomersByLastName", R, 1, {{"CUSTOMER", 10}},
              concat(c_key,
                     refs("CUSTOMER",
                          {"C_FIRST", "C_MIDDLE", "C_LAST", "C_STREET_1",
                           "C_STREET_2", "C_CITY", "C_STATE", "C_ZIP",
                           "C_PHONE", "C_SINCE", "C_CREDIT", "C_CREDIT_LIM",
                           "C_DISCOUNT", "C_BALANCE"})));
  const auto customer_payment =
      refs("CUSTOMER", {"C_BALANCE", "C_YTD_PAYMENT", "C_PAYMENT_CNT"});
  b.add_query(payment, "pay_updateCustomer_read", R, 1, {{"CUSTOMER", 1}},
              concat(c_key, customer_payment));
  b.add_query(payment, "pay_updateCustomer_write", W, 1, {{"CUSTOMER", 1}},
              customer_payment);
  b.add_query(payment, "pay_updateCustomerData_read", R, 1, {{"CUSTOMER", 1}},
              concat(c_key, refs("CUSTOMER", {"C_DATA"})));
  b.add_query(payment, "pay_updateCustomerData_write", W, 1,
              {{"CUSTOMER", 1}}, refs("CUSTOMER", {"C_DATA"}));
  b.add_query(payment, "pay_insertHistory", W, 1, {{"HISTORY", 1}},
              all_columns(schema, "HISTORY"));

  const int order_status = b.add_transaction("Order-Status");
  b.add_query(order_status, "os_countByLastName", R, 1, {{"CUSTOMER", 10}},
              concat(c_key, refs("CUSTOMER", {"C_LAST"})));
  b.add_query(order_status, "os_getCustomer", R, 1, {{"CUSTOMER", 10}},
              concat(c_key, refs("CUSTOMER", {"C_BALANCE", "C_FIRST",
                                              "C_MIDDLE", "C_LAST"})));
  b.add_query(order_status, "os_getLastOrder", R, 1, {{"ORDERS", 10}},
              concat(o_key, refs("ORDERS", {"O_C_ID", "O_CARRIER_ID",
                                            "O_ENTRY_D"})));
  b.add_query(order_status, "os_getOrderLines", R, 1, {{"ORDER_LINE", 10}},
              concat(ol_key, refs("ORDER_LINE",
                                  {"OL_I_ID", "OL_SUPPLY_W_ID", "OL_QUANTITY",
                                   "OL_AMOUNT", "OL_DELIVERY_D"})));

  const int delivery = b.add_transaction("Delivery");
  b.add_query(delivery, "dl_getNewOrder", R, 1, {{"NEW_ORDER", 10}},
              all_columns(schema, "NEW_ORDER"));
  b.add_query(delivery, "dl_deleteNewOrder", W, 1, {{"NEW_ORDER", 10}},
              all_columns(schema, "NEW_ORDER"));
  b.add_query(delivery, "dl_getCustomerId", R, 1, {{"ORDERS", 10}},
              concat(o_key, refs("ORDERS", {"O_C_ID"})));
  b.add_query(delivery, "dl_updateCarrier_read", R, 1, {{"ORDERS", 10}},
              concat(o_key, refs("ORDERS", {"O_CARRIER_ID"})));
  b.add_query(delivery, "dl_updateCarrier_write", W, 1, {{"ORDERS", 10}},
              refs("ORDERS", {"O_CARRIER_ID"}));
  b.add_query(delivery, "dl_updateDeliveryDate_read", R, 1,
              {{"ORDER_LINE", 10}},
              concat(ol_key, refs("ORDER_LINE", {"OL_DELIVERY_D"})));
  b.add_query(delivery, "dl_updateDeliveryDate_write", W, 1,
              {{"ORDER_LINE", 10}}, refs("ORDER_LINE", {"OL_DELIVERY_D"}));
  b.add_query(delivery, "dl_sumOrderAmount", R, 1, {{"ORDER_LINE", 10}},
              concat(ol_key, refs("ORDER_LINE", {"OL_AMOUNT"})));
  const auto customer_delivery =
      refs("CUSTOMER", {"C_BALANCE", "C_DELIVERY_CNT"});
  b.add_query(delivery, "dl_updateCustomer_read", R, 1, {{"CUSTOMER", 10}},
              concat(c_key, customer_delivery));
  b.add_query(delivery, "dl_updateCustomer_write", W, 1, {{"CUSTOMER", 10}},
              customer_delivery);

  const int stock_level = b.add_transaction("Stock-Level");
  b.add_query(stock_level, "sl_getOId", R, 1, {{"DISTRICT", 1}},
              concat(d_key, refs("DISTRICT", {"D_NEXT_O_ID"})));
  b.add_query(stock_level, "sl_getStockCount", R, 1,
              {{"ORDER_LINE", 10}, {"STOCK", 10}},
              concat(concat(ol_key, refs("ORDER_LINE", {"OL_I_ID"})),
                     concat(s_key, refs("STOCK", {"S_QUANTITY"}))));
  return b.build();
}

}  // namespace vpart
