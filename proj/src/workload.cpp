// Copyright 2026 The edfola Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edf/workload.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "edf/error.hpp"

namespace edf {
namespace {

// Generators use raw mt19937_64 output so datasets do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(n)); }
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  /// Amount in cents as a float64 with two decimals.
  double money(std::int64_t lo_cents, std::int64_t hi_cents) {
    return static_cast<double>(between(lo_cents, hi_cents)) / 100.0;
  }

 private:
  std::mt19937_64 gen_;
};

AttributeDef attr(std::string name, ValueKind kind) { return {std::move(name), kind, Mutability::constant}; }

constexpr auto I = ValueKind::int64;
constexpr auto F = ValueKind::float64;
constexpr auto S = ValueKind::utf8;

/// Splits a batch into contiguous slices of near-equal size.
std::vector<RowBatch> split_even(const RowBatch& all, std::size_t parts) {
  parts = std::max<std::size_t>(1, std::min(parts, std::max<std::size_t>(all.row_count(), 1)));
  std::vector<RowBatch> out;
  std::size_t n = all.row_count();
  for (std::size_t p = 0; p < parts; ++p) {
    std::size_t lo = n * p / parts;
    std::size_t hi = n * (p + 1) / parts;
    std::vector<std::size_t> idx(hi - lo);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = lo + i;
    out.push_back(all.take(idx));
  }
  return out;
}

/// Splits at the given row offsets (exclusive ends).
std::vector<RowBatch> split_at(const RowBatch& all, const std::vector<std::size_t>& ends) {
  std::vector<RowBatch> out;
  std::size_t lo = 0;
  for (auto hi : ends) {
    if (hi == lo) continue;
    std::vector<std::size_t> idx(hi - lo);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = lo + i;
    out.push_back(all.take(idx));
    lo = hi;
  }
  return out;
}

const std::vector<std::string> kStates = {"CA", "NY", "TX", "WA", "IL", "FL", "MA", "OR", "CO", "GA", "AZ", "NV"};
const std::vector<std::string> kRegions = {"north", "south", "east", "west", "central"};
const std::vector<std::string> kPriorities = {"1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"};
const std::vector<std::string> kNations = {"ALGERIA", "BRAZIL", "CANADA", "EGYPT", "FRANCE", "INDIA", "JAPAN", "PERU"};
const std::vector<std::string> kTypePrefix = {"PROMO", "STANDARD", "ECONOMY", "LARGE", "SMALL"};
const std::vector<std::string> kTypeSuffix = {"BRUSHED TIN", "POLISHED STEEL", "ANODIZED COPPER", "PLATED NICKEL"};

std::string part_type(Rng& rng) {
  return kTypePrefix[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(kTypePrefix.size())))] + " " +
         kTypeSuffix[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(kTypeSuffix.size())))];
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(v.size())))];
}

QuerySpecFile with_tables(QueryGraphSpec g, const Dataset& d) {
  QuerySpecFile q;
  q.graph = std::move(g);
  for (const auto& [name, _] : d.tables) q.tables[name] = name;
  return q;
}

AggSpec agg(AggTag tag, std::string column = {}, std::string output = {}, std::string weight = {}, double q = 0.5) {
  AggSpec s;
  s.kind.tag = tag;
  s.kind.q = q;
  s.column = std::move(column);
  s.weight = std::move(weight);
  s.output = output.empty() ? AggSpec::default_output(s.kind, s.column) : std::move(output);
  return s;
}

MapExpr expr(std::string out, std::string fn, std::vector<ExprArg> args) {
  return {std::move(out), std::move(fn), std::move(args)};
}

Predicate where(std::string column, CompareOp op, Value literal) {
  Predicate p;
  p.terms.push_back({std::move(column), op, std::move(literal)});
  return p;
}

}  // namespace

Bindings Dataset::bindings(std::uint64_t seed) const {
  Bindings b;
  std::uint64_t salt = 0;
  for (const auto& [name, table] : tables) {
    std::vector<BatchPtr> parts;
    for (const auto& p : table.partitions) parts.push_back(std::make_shared<const RowBatch>(p));
    auto meta = make_memory_meta(name, table.schema, parts);
    if (seed != 0 && !meta.clustered()) b.orders[name] = shuffle_order(meta, seed + 0x9E3779B97F4A7C15ULL * salt);
    ++salt;
    b.sources[name] = std::make_shared<CachedPartitionSource>(std::move(meta), std::move(parts));
  }
  return b;
}

void Dataset::write(const std::filesystem::path& dir) const {
  for (const auto& [name, table] : tables) write_table(dir / name, name, table.schema, table.partitions);
}

Workload make_monomial(const MonomialParams& p) {
  if (p.partitions == 0 || p.rows < p.partitions || p.groups == 0) {
    throw ValidationError("monomial needs rows >= partitions >= 1 and groups >= 1");
  }
  if (p.u < 0.0 || p.v < 0.0) throw ValidationError("monomial powers must be non-negative");
  const std::size_t P = p.partitions;
  const std::size_t per = p.rows / P;
  // Scale kept rows so no partition needs more kept rows than it holds.
  double max_inc = 0.0;
  for (std::size_t i = 1; i <= P; ++i) {
    double a = std::pow(static_cast<double>(i - 1) / static_cast<double>(P), p.u);
    double b = std::pow(static_cast<double>(i) / static_cast<double>(P), p.u);
    max_inc = std::max(max_inc, b - a);
  }
  const double kept_total = std::floor(static_cast<double>(per) / max_inc);
  auto kept_at = [&](std::size_t i) {
    return static_cast<std::size_t>(std::llround(kept_total * std::pow(static_cast<double>(i) / static_cast<double>(P), p.u)));
  };
  auto groups_at = [&](std::size_t i) -> std::size_t {
    if (i == 0) return 0;
    auto g = std::llround(static_cast<double>(p.groups) * std::pow(static_cast<double>(i) / static_cast<double>(P), p.v));
    return static_cast<std::size_t>(std::max<long long>(1, g));
  };

  Rng rng(p.seed);
  auto schema = make_schema(EdfSchema({attr("id", I), attr("g", I), attr("keep", I), attr("val", F)}, {"id"}));
  BatchBuilder bb(schema);
  std::int64_t id = 0;
  std::size_t present = 0;
  std::vector<std::size_t> ends;
  for (std::size_t i = 1; i <= P; ++i) {
    std::size_t k = std::min(per, kept_at(i) - kept_at(i - 1));
    std::size_t fresh = groups_at(i) - groups_at(i - 1);
    if (fresh > k) throw ValidationError("monomial parameters need more kept rows than partitions allow");
    std::vector<std::int64_t> keep(per, 0);
    std::fill(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(k), 1);
    for (std::size_t r = per; r > 1; --r) std::swap(keep[r - 1], keep[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(r)))]);
    std::size_t kept_seen = 0;
    for (std::size_t r = 0; r < per; ++r) {
      std::int64_t g;
      if (keep[r]) {
        if (kept_seen < fresh) {
          g = static_cast<std::int64_t>(present + kept_seen);
        } else {
          g = rng.below(static_cast<std::int64_t>(present + fresh));
        }
        ++kept_seen;
      } else {
        g = rng.below(static_cast<std::int64_t>(p.groups));
      }
      bb.add_row(std::vector<Value>{id++, g, keep[r], rng.money(0, 10000)});
    }
    present += fresh;
    ends.push_back(static_cast<std::size_t>(id));
  }
  Workload w;
  w.name = "monomial";
  w.data.tables["mono"] = {schema, split_at(std::move(bb).finish(), ends)};
  QueryGraphSpec g;
  g.read("r", "mono")
      .filter("f", "r", where("keep", CompareOp::eq, std::int64_t{1}))
      .agg("a", "f", {"g"}, {agg(AggTag::count), agg(AggTag::sum, "val")});
  w.query = with_tables(std::move(g), w.data);
  return w;
}

Dataset make_deepquery_data(const DeepQueryParams& p) {
  if (p.depth_cols == 0 || p.branching == 0 || p.rows == 0 || p.partitions == 0) {
    throw ValidationError("deepquery parameters must be positive");
  }
  std::vector<AttributeDef> attrs{attr("id", I)};
  for (std::size_t c = 1; c <= p.depth_cols; ++c) attrs.push_back(attr("c" + std::to_string(c), I));
  attrs.push_back(attr("x", I));
  auto schema = make_schema(EdfSchema(attrs, {"id"}));
  Rng rng(p.seed);
  BatchBuilder bb(schema);
  std::vector<Value> row(attrs.size());
  for (std::size_t r = 0; r < p.rows; ++r) {
    row[0] = static_cast<std::int64_t>(r);
    for (std::size_t c = 1; c <= p.depth_cols; ++c) row[c] = rng.below(static_cast<std::int64_t>(p.branching));
    row.back() = rng.below(1000000);
    bb.add_row(row);
  }
  Dataset d;
  d.tables["deep"] = {schema, split_even(std::move(bb).finish(), p.partitions)};
  return d;
}

QueryGraphSpec deep_query(std::size_t depth) {
  QueryGraphSpec g;
  g.read("r", "deep");
  std::vector<std::string> by;
  for (std::size_t c = 1; c <= depth; ++c) by.push_back("c" + std::to_string(c));
  g.agg("a0", "r", by, {agg(AggTag::max, "x", "max_x")});
  std::string prev = "a0";
  std::string col = "max_x";
  for (std::size_t level = 1; level <= depth; ++level) {
    by.pop_back();
    std::string out = "sum_" + col;
    std::string id = "a" + std::to_string(level);
    g.agg(id, prev, by, {agg(AggTag::sum, col, out)});
    prev = id;
    col = out;
  }
  return g;
}

Workload make_deepquery(const DeepQueryParams& p) {
  if (p.depth > p.depth_cols) throw ValidationError("depth exceeds the number of group-by columns");
  Workload w;
  w.name = "deepquery_d" + std::to_string(p.depth);
  w.data = make_deepquery_data(p);
  w.query = with_tables(deep_query(p.depth), w.data);
  return w;
}

Dataset make_students(std::size_t rows, std::size_t partitions, std::uint64_t seed) {
  auto schema = make_schema(
      EdfSchema({attr("id", I), attr("name", S), attr("state", S), attr("age", I), attr("score", F)}, {"id"}));
  Rng rng(seed);
  BatchBuilder bb(schema);
  for (std::size_t r = 0; r < rows; ++r) {
    // Skewed states: the first few are drawn more often.
    auto s = static_cast<std::size_t>(std::min(rng.below(static_cast<std::int64_t>(kStates.size())),
                                               rng.below(static_cast<std::int64_t>(kStates.size()))));
    bb.add_row(std::vector<Value>{static_cast<std::int64_t>(r), "student" + std::to_string(r), kStates[s],
                                  rng.between(18, 30), static_cast<double>(rng.between(0, 1000)) / 10.0});
  }
  Dataset d;
  d.tables["students"] = {schema, split_even(std::move(bb).finish(), partitions)};
  return d;
}

Dataset make_orders(std::size_t orders, std::size_t partitions, std::uint64_t seed) {
  if (orders == 0 || partitions == 0) throw ValidationError("orders and partitions must be positive");
  Rng rng(seed);
  const std::size_t customers = std::max<std::size_t>(10, orders / 10);
  const std::size_t parts = std::max<std::size_t>(20, orders / 20);
  Dataset d;

  auto part_schema = make_schema(
      EdfSchema({attr("partkey", I), attr("p_type", S), attr("p_size", I), attr("retailprice", F)}, {"partkey"}));
  std::vector<std::int64_t> price_cents(parts);
  {
    BatchBuilder bb(part_schema);
    for (std::size_t k = 0; k < parts; ++k) {
      price_cents[k] = rng.between(900, 20000);
      bb.add_row(std::vector<Value>{static_cast<std::int64_t>(k), part_type(rng), rng.between(1, 50),
                                    static_cast<double>(price_cents[k]) / 100.0});
    }
    d.tables["part"] = {part_schema, split_even(std::move(bb).finish(), std::min(partitions, parts))};
  }

  auto cust_schema = make_schema(
      EdfSchema({attr("custkey", I), attr("c_name", S), attr("nation", S), attr("acctbal", F)}, {"custkey"}));
  {
    BatchBuilder bb(cust_schema);
    for (std::size_t k = 0; k < customers; ++k) {
      bb.add_row(std::vector<Value>{static_cast<std::int64_t>(k), "Customer#" + std::to_string(k),
                                    pick(rng, kNations), rng.money(-99999, 999999)});
    }
    d.tables["customer"] = {cust_schema, split_even(std::move(bb).finish(), std::min(partitions, customers))};
  }

  auto orders_schema = make_schema(EdfSchema(
      {attr("orderkey", I), attr("custkey", I), attr("orderdate", I), attr("priority", S)}, {"orderkey"},
      std::vector<std::string>{"orderkey"}));
  auto line_schema = make_schema(EdfSchema({attr("orderkey", I), attr("linenumber", I), attr("partkey", I),
                                            attr("quantity", I), attr("extendedprice", F), attr("discount", F)},
                                           {"orderkey", "linenumber"}, std::vector<std::string>{"orderkey"}));
  BatchBuilder ob(orders_schema);
  BatchBuilder lb(line_schema);
  std::vector<std::size_t> order_ends;
  std::vector<std::size_t> line_ends;
  std::size_t lines = 0;
  const std::size_t P = std::min(partitions, orders);
  for (std::size_t o = 0; o < orders; ++o) {
    auto key = static_cast<std::int64_t>(o + 1);
    ob.add_row(std::vector<Value>{key, rng.below(static_cast<std::int64_t>(customers)), rng.between(0, 2405),
                                  pick(rng, kPriorities)});
    auto n = rng.between(1, 7);
    for (std::int64_t l = 1; l <= n; ++l) {
      auto pk = rng.below(static_cast<std::int64_t>(parts));
      auto qty = rng.between(1, 50);
      lb.add_row(std::vector<Value>{key, l, pk, qty,
                                    static_cast<double>(qty * price_cents[static_cast<std::size_t>(pk)]) / 100.0,
                                    static_cast<double>(rng.between(0, 10)) / 100.0});
      ++lines;
    }
    if ((o + 1) * P / orders != o * P / orders) {
      order_ends.push_back(o + 1);
      line_ends.push_back(lines);
    }
  }
  d.tables["orders"] = {orders_schema, split_at(std::move(ob).finish(), order_ends)};
  d.tables["lineitem"] = {line_schema, split_at(std::move(lb).finish(), line_ends)};
  return d;
}

Dataset make_sales(std::size_t rows, std::size_t partitions, std::uint64_t seed) {
  auto schema = make_schema(EdfSchema({attr("id", I), attr("region", S), attr("product", S), attr("units", I),
                                       attr("price", F), attr("discount", F)},
                                      {"id"}));
  Rng rng(seed);
  BatchBuilder bb(schema);
  for (std::size_t r = 0; r < rows; ++r) {
    bb.add_row(std::vector<Value>{static_cast<std::int64_t>(r), pick(rng, kRegions),
                                  "product" + std::to_string(rng.below(30)), rng.between(1, 20), rng.money(100, 50000),
                                  static_cast<double>(rng.between(0, 30)) / 100.0});
  }
  Dataset d;
  d.tables["sales"] = {schema, split_even(std::move(bb).finish(), partitions)};
  return d;
}

Dataset make_promo(std::size_t rows, std::size_t parts, std::size_t partitions, std::uint64_t seed) {
  if (parts == 0) throw ValidationError("promo needs at least one part");
  Rng rng(seed);
  auto part_schema = make_schema(EdfSchema({attr("partkey", I), attr("p_type", S)}, {"partkey"}));
  auto line_schema = make_schema(EdfSchema(
      {attr("id", I), attr("partkey", I), attr("price_cents", I), attr("disc_pct", I)}, {"id"}));
  Dataset d;
  BatchBuilder pb(part_schema);
  for (std::size_t k = 0; k < parts; ++k) pb.add_row(std::vector<Value>{static_cast<std::int64_t>(k), part_type(rng)});
  d.tables["part"] = {part_schema, {std::move(pb).finish()}};
  BatchBuilder lb(line_schema);
  for (std::size_t r = 0; r < rows; ++r) {
    lb.add_row(std::vector<Value>{static_cast<std::int64_t>(r), rng.below(static_cast<std::int64_t>(parts)),
                                  rng.between(100, 100000), rng.between(0, 10)});
  }
  d.tables["lineitem"] = {line_schema, split_even(std::move(lb).finish(), partitions)};
  return d;
}

QueryGraphSpec promo_query() {
  QueryGraphSpec g;
  g.read("l", "lineitem").read("p", "part");
  g.join("j", "l", "p", JoinSpec{{{"partkey", "partkey"}}, JoinHow::inner, JoinMethod::hash});
  MapSpec m;
  m.keep = std::vector<std::string>{"id"};
  m.exprs = {expr("net", "sub", {ExprArg::num(100), ExprArg::col("disc_pct")}),
             expr("rev", "mul", {ExprArg::col("price_cents"), ExprArg::col("net")}),
             expr("promo", "if_prefix", {ExprArg::col("p_type"), ExprArg::str("PROMO"), ExprArg::num(1)})};
  g.map("m", "j", m);
  g.agg("a", "m", {}, {agg(AggTag::avg, "promo", "promo_share", "rev")});
  return g;
}

std::vector<Workload> benchmark_suite(std::uint64_t seed) {
  std::vector<Workload> out;
  auto students = make_students(4000, 10, seed);
  auto orders = make_orders(1500, 8, seed + 1);
  auto sales = make_sales(6000, 12, seed + 2);
  auto promo = make_promo(5000, 200, 10, seed + 3);

  auto add = [&](std::string name, const Dataset& d, QueryGraphSpec g) {
    Workload w;
    w.name = std::move(name);
    w.data = d;
    w.query = with_tables(std::move(g), d);
    out.push_back(std::move(w));
  };

  {
    QueryGraphSpec g;
    g.read("r", "students").agg("a", "r", {"state"}, {agg(AggTag::count), agg(AggTag::avg, "score")});
    add("students_by_state", students, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("r", "students")
        .filter("f", "r", where("score", CompareOp::ge, 40.0))
        .agg("a", "f", {"state"},
             {agg(AggTag::var, "score"), agg(AggTag::stddev, "score"), agg(AggTag::min, "age"),
              agg(AggTag::max, "age"), agg(AggTag::order_stat, "score", "median_score", {}, 0.5)});
    add("students_spread", students, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("r", "students")
        .agg("a", "r", {"state"}, {agg(AggTag::avg, "score")})
        .sort_limit("s", "a", {{"avg_score", true}}, 3);
    add("students_top_states", students, std::move(g));
  }
  {
    // Clustered merge join feeding a local aggregation on the clustering key.
    QueryGraphSpec g;
    g.read("l", "lineitem").read("o", "orders");
    g.join("j", "l", "o", JoinSpec{{{"orderkey", "orderkey"}}, JoinHow::inner, JoinMethod::merge});
    MapSpec m;
    m.exprs = {expr("revenue", "mul_one_minus", {ExprArg::col("extendedprice"), ExprArg::col("discount")})};
    g.map("m", "j", m);
    g.agg("per_order", "m", {"orderkey", "priority"}, {agg(AggTag::sum, "revenue"), agg(AggTag::count)});
    g.agg("a", "per_order", {"priority"}, {agg(AggTag::sum, "sum_revenue", "revenue"), agg(AggTag::avg, "count", "lines_per_order")});
    add("orders_revenue_by_priority", orders, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("o", "orders").read("c", "customer");
    g.join("j", "o", "c", JoinSpec{{{"custkey", "custkey"}}, JoinHow::inner, JoinMethod::hash});
    g.agg("a", "j", {"nation"}, {agg(AggTag::count), agg(AggTag::count_distinct, "custkey")});
    add("orders_by_nation", orders, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("l", "lineitem").read("p", "part");
    g.filter("f", "p", where("p_type", CompareOp::starts_with, std::string("PROMO")));
    g.join("j", "l", "f", JoinSpec{{{"partkey", "partkey"}}, JoinHow::left, JoinMethod::hash});
    g.agg("a", "j", {"_matched"}, {agg(AggTag::count), agg(AggTag::sum, "quantity")});
    add("lineitem_promo_left_join", orders, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("r", "sales");
    MapSpec m;
    m.exprs = {expr("gross", "mul", {ExprArg::col("units"), ExprArg::col("price")}),
               expr("net", "mul_one_minus", {ExprArg::col("gross"), ExprArg::col("discount")})};
    g.map("m", "r", m);
    g.agg("a", "m", {"region"},
          {agg(AggTag::sum, "net"), agg(AggTag::avg, "price", "avg_unit_price", "units"),
           agg(AggTag::count_distinct, "product")});
    add("sales_by_region", sales, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("r", "sales")
        .filter("f", "r", where("region", CompareOp::ne, std::string("central")))
        .agg("a", "f", {"product"},
             {agg(AggTag::order_stat, "price", "p90_price", {}, 0.9), agg(AggTag::min, "price"),
              agg(AggTag::max, "price")})
        .sort_limit("s", "a", {{"p90_price", true}, {"product", false}}, 10);
    add("sales_price_quantiles", sales, std::move(g));
  }
  {
    QueryGraphSpec g;
    g.read("r", "sales").agg("a", "r", {},
                             {agg(AggTag::sum, "units"), agg(AggTag::var, "price"), agg(AggTag::stddev, "discount"),
                              agg(AggTag::count)});
    add("sales_scalar", sales, std::move(g));
  }
  {
    MonomialParams mp;
    mp.u = 1.5;
    mp.v = 0.5;
    mp.rows = 6000;
    mp.seed = seed + 4;
    auto w = make_monomial(mp);
    add("monomial_u1.5_v0.5", w.data, w.query.graph);
  }
  {
    DeepQueryParams dp;
    dp.depth = 3;
    dp.rows = 20000;
    dp.seed = seed + 5;
    auto w = make_deepquery(dp);
    add("deepquery_d3", w.data, w.query.graph);
  }
  add("promo_revenue_share", promo, promo_query());
  return out;
}

}  // namespace edf
