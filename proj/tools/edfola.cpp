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

// edfola: run online-aggregation queries over partitioned CSV tables.
//
//   edfola run QUERY DATA_DIR [--seed N] [--ci-level 0.95] [--trace FILE]
//   edfola exact QUERY DATA_DIR
//   edfola score STREAM EXACT
//   edfola gen monomial|deepquery|students|orders|sales|promo|suite --out DIR
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "edf/batch_oracle.hpp"
#include "edf/error.hpp"
#include "edf/executor.hpp"
#include "edf/query_spec.hpp"
#include "edf/scoring.hpp"
#include "edf/snapshot_io.hpp"
#include "edf/table.hpp"
#include "edf/workload.hpp"

namespace {

using namespace edf;

struct RunArgs {
  std::string query;
  std::string data;
  std::optional<std::uint64_t> seed;
  std::string order = "auto";
  std::optional<double> ci_level;
  std::string trace;
  bool sequential = false;
  bool force_shuffle = false;
};

void apply_order(Bindings& b, const RunArgs& a) {
  std::string mode = a.order;
  if (mode == "auto") mode = a.seed ? "shuffle" : "natural";
  if (mode == "natural") return;
  for (const auto& [name, src] : b.sources) {
    const auto& meta = src->meta();
    if (mode == "shuffle") {
      if (!a.seed) throw ValidationError("--partition-order shuffle needs --seed");
      if (meta.clustered() && !a.force_shuffle) continue;
      b.orders[name] = shuffle_order(meta, *a.seed, a.force_shuffle);
    } else if (mode == "reverse") {
      if (meta.clustered() && !a.force_shuffle) {
        throw ValidationError("table '" + name + "' is clustered; reordering it needs --force-shuffle");
      }
      std::vector<std::size_t> order(meta.partitions.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
      b.orders[name] = order;
    } else {
      throw ValidationError("unknown partition order '" + a.order + "'");
    }
  }
}

struct Loaded {
  QuerySpecFile spec;
  Bindings bindings;
  QueryGraph graph;
};

Loaded load(const std::string& query, const std::string& data) {
  auto spec = load_query_spec(query);
  auto bindings = bind_directory(data, spec.tables);
  auto graph = build_graph(spec.graph, bindings.schemas());
  return {std::move(spec), std::move(bindings), std::move(graph)};
}

int cmd_run(const RunArgs& a) {
  auto l = load(a.query, a.data);
  apply_order(l.bindings, a);
  RunOptions opts;
  if (a.ci_level) {
    if (!(*a.ci_level > 0.0 && *a.ci_level < 1.0)) throw ValidationError("--ci-level must be in (0, 1)");
    opts.ci_delta = 1.0 - *a.ci_level;
    opts.extrinsic.track_variance = true;
  }
  TraceLog trace;
  if (!a.trace.empty()) opts.trace = &trace;
  auto sink = [](const SnapshotRecord& s) { std::cout << snapshot_to_json(s) << '\n' << std::flush; };
  if (a.sequential) {
    run_sequential(l.graph, l.bindings, opts, sink);
  } else {
    run(l.graph, l.bindings, opts, sink);
  }
  if (!a.trace.empty()) trace.write(a.trace);
  return 0;
}

int cmd_exact(const std::string& query, const std::string& data) {
  auto l = load(query, data);
  auto snaps = run_sequential(l.graph, l.bindings);
  if (snaps.empty()) throw ExecutionError("query produced no snapshot");
  const auto& final_rows = *snaps.back().rows;
  // Cross-check the engine's final answer against direct evaluation.
  auto diff = compare_batches(final_rows, evaluate_batch(l.graph, l.bindings), 1e-9);
  if (!diff.equal) throw ExecutionError("final snapshot disagrees with batch evaluation: " + diff.message);
  std::cout << exact_to_json(final_rows) << '\n';
  return 0;
}

std::vector<ResultRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_result_stream(in);
}

int cmd_score(const std::string& stream_path, const std::string& exact_path) {
  auto stream = read_records(stream_path);
  auto exact = read_records(exact_path);
  if (exact.size() != 1) throw ValidationError("exact result must hold exactly one record");
  for (const auto& r : stream) {
    if (r.columns != exact[0].columns || r.key != exact[0].key) {
      throw ValidationError("snapshot " + std::to_string(r.index) + " does not match the exact result's schema");
    }
  }
  for (const auto& s : score(stream, exact[0]).snapshots) std::cout << to_json(s) << '\n';
  return 0;
}

void write_workload(const Workload& w, const std::filesystem::path& out) {
  w.data.write(out);
  std::ofstream q(out / "query.json");
  if (!q) throw ExecutionError("cannot write " + (out / "query.json").string());
  q << to_json(w.query) << '\n';
}

void write_dataset(const Dataset& d, const std::filesystem::path& out) { d.write(out); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online aggregation over evolving data frames"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Stream snapshots of a query as JSON lines");
  run_cmd->add_option("query", ra.query, "Query description (JSON)")->required();
  run_cmd->add_option("data", ra.data, "Directory holding the table directories")->required();
  run_cmd->add_option("--seed", ra.seed, "Shuffle unclustered tables' partitions with this seed");
  run_cmd->add_option("--partition-order", ra.order, "auto, natural, shuffle or reverse");
  run_cmd->add_option("--ci-level", ra.ci_level, "Emit Chebyshev intervals at this level, e.g. 0.95");
  run_cmd->add_option("--trace", ra.trace, "Write the executor trace to this file");
  run_cmd->add_flag("--sequential", ra.sequential, "Run node by node on one thread");
  run_cmd->add_flag("--force-shuffle", ra.force_shuffle, "Allow reordering clustered tables");

  std::string eq, ed;
  auto* exact_cmd = app.add_subcommand("exact", "Print the exact result as one JSON line");
  exact_cmd->add_option("query", eq)->required();
  exact_cmd->add_option("data", ed)->required();

  std::string ss, se;
  auto* score_cmd = app.add_subcommand("score", "Score a snapshot stream against the exact result");
  score_cmd->add_option("stream", ss)->required();
  score_cmd->add_option("exact", se)->required();

  std::string kind, out;
  MonomialParams mp;
  std::optional<double> w;
  DeepQueryParams dp;
  std::size_t rows = 0;
  std::size_t partitions = 10;
  std::uint64_t seed = 1;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset and a matching query");
  gen_cmd->add_option("kind", kind, "monomial, deepquery, students, orders, sales, promo or suite")->required();
  gen_cmd->add_option("--out", out, "Output directory")->required();
  gen_cmd->add_option("--rows", rows, "Row count (orders: number of orders)");
  gen_cmd->add_option("--partitions", partitions);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--w", w, "monomial: growth power of the mean group cardinality (u = w + v)");
  gen_cmd->add_option("--u", mp.u, "monomial: growth power of the kept row count");
  gen_cmd->add_option("--v", mp.v, "monomial: growth power of the group count");
  gen_cmd->add_option("--groups", mp.groups);
  gen_cmd->add_option("--depth", dp.depth, "deepquery: depth of the emitted query");
  gen_cmd->add_option("--depth-cols", dp.depth_cols);
  gen_cmd->add_option("--branching", dp.branching);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(ra);
    if (*exact_cmd) return cmd_exact(eq, ed);
    if (*score_cmd) return cmd_score(ss, se);
    if (*gen_cmd) {
      std::filesystem::path dir(out);
      if (kind == "monomial") {
        if (w) mp.u = *w + mp.v;
        mp.partitions = partitions;
        mp.seed = seed;
        if (rows) mp.rows = rows;
        write_workload(make_monomial(mp), dir);
      } else if (kind == "deepquery") {
        dp.partitions = partitions;
        dp.seed = seed;
        if (rows) dp.rows = rows;
        write_workload(make_deepquery(dp), dir);
      } else if (kind == "students") {
        write_dataset(make_students(rows ? rows : 10000, partitions, seed), dir);
      } else if (kind == "orders") {
        write_dataset(make_orders(rows ? rows : 2000, partitions, seed), dir);
      } else if (kind == "sales") {
        write_dataset(make_sales(rows ? rows : 10000, partitions, seed), dir);
      } else if (kind == "promo") {
        Workload wl;
        wl.name = "promo";
        wl.data = make_promo(rows ? rows : 10000, 200, partitions, seed);
        wl.query.graph = promo_query();
        for (const auto& [name, _] : wl.data.tables) wl.query.tables[name] = name;
        write_workload(wl, dir);
      } else if (kind == "suite") {
        for (const auto& wl : benchmark_suite(seed)) write_workload(wl, dir / wl.name);
      } else {
        throw ValidationError("unknown dataset kind '" + kind + "'");
      }
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "edfola: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "edfola: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
