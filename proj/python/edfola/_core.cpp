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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edf/batch_oracle.hpp"
#include "edf/confidence.hpp"
#include "edf/count_distinct.hpp"
#include "edf/error.hpp"
#include "edf/executor.hpp"
#include "edf/growth_model.hpp"
#include "edf/query_spec.hpp"
#include "edf/scoring.hpp"
#include "edf/snapshot_io.hpp"
#include "edf/workload.hpp"

namespace py = pybind11;
using namespace edf;

namespace {

struct Loaded {
  Bindings bindings;
  QueryGraph graph;
};

Loaded load(const std::string& query_json, const std::string& data_dir) {
  auto spec = parse_query_spec(query_json);
  auto bindings = bind_directory(data_dir, spec.tables);
  auto graph = build_graph(spec.graph, bindings.schemas());
  return {std::move(bindings), std::move(graph)};
}

std::vector<std::string> run_query(const std::string& query_json, const std::string& data_dir,
                                   std::optional<std::uint64_t> seed, std::optional<double> ci_level,
                                   bool sequential) {
  auto l = load(query_json, data_dir);
  if (seed) {
    for (const auto& [name, src] : l.bindings.sources) {
      if (!src->meta().clustered()) l.bindings.orders[name] = shuffle_order(src->meta(), *seed);
    }
  }
  RunOptions opts;
  if (ci_level) {
    if (!(*ci_level > 0.0 && *ci_level < 1.0)) throw ValidationError("ci_level must be in (0, 1)");
    opts.ci_delta = 1.0 - *ci_level;
    opts.extrinsic.track_variance = true;
  }
  std::vector<std::string> lines;
  auto sink = [&](const SnapshotRecord& s) { lines.push_back(snapshot_to_json(s)); };
  py::gil_scoped_release release;
  if (sequential) {
    run_sequential(l.graph, l.bindings, opts, sink);
  } else {
    run(l.graph, l.bindings, opts, sink);
  }
  return lines;
}

std::string exact_result(const std::string& query_json, const std::string& data_dir) {
  auto l = load(query_json, data_dir);
  auto snaps = run_sequential(l.graph, l.bindings);
  if (snaps.empty()) throw ExecutionError("query produced no snapshot");
  const auto& final_rows = *snaps.back().rows;
  auto diff = compare_batches(final_rows, evaluate_batch(l.graph, l.bindings), 1e-9);
  if (!diff.equal) throw ExecutionError("final snapshot disagrees with batch evaluation: " + diff.message);
  return exact_to_json(final_rows);
}

std::vector<std::string> score_lines(const std::vector<std::string>& stream, const std::string& exact_line) {
  auto exact = parse_result_line(exact_line);
  std::vector<ResultRecord> records;
  for (const auto& s : stream) records.push_back(parse_result_line(s));
  std::vector<std::string> out;
  for (const auto& s : score(records, exact).snapshots) out.push_back(to_json(s));
  return out;
}

void write_workload(const Workload& w, const std::filesystem::path& dir) {
  w.data.write(dir);
  std::ofstream q(dir / "query.json");
  if (!q) throw ExecutionError("cannot write " + (dir / "query.json").string());
  q << to_json(w.query) << '\n';
}

std::vector<std::string> write_suite(const std::string& out, std::uint64_t seed) {
  std::vector<std::string> names;
  for (const auto& w : benchmark_suite(seed)) {
    write_workload(w, std::filesystem::path(out) / w.name);
    names.push_back(w.name);
  }
  return names;
}

void write_monomial(const std::string& out, double u, double v, std::size_t groups, std::size_t partitions,
                    std::size_t rows, std::uint64_t seed) {
  write_workload(make_monomial({u, v, groups, partitions, rows, seed}), out);
}

void write_deepquery(const std::string& out, std::size_t depth, std::size_t rows, std::size_t partitions,
                     std::uint64_t seed) {
  DeepQueryParams p;
  p.depth = depth;
  p.rows = rows;
  p.partitions = partitions;
  p.seed = seed;
  write_workload(make_deepquery(p), out);
}

py::dict fit_growth(const std::vector<std::pair<double, double>>& points) {
  GrowthModel m;
  for (const auto& [t, c] : points) m.observe(t, c);
  auto f = m.fit_power();
  py::dict d;
  d["w"] = f.w;
  d["var_w"] = f.var_w;
  d["fallback"] = f.fallback;
  return d;
}

py::dict solve_distinct(double y, double n, double N) {
  auto s = mm1::solve(y, n, N);
  py::dict d;
  d["Y"] = s.Y;
  d["iterations"] = s.iterations;
  d["used_bisection"] = s.used_bisection;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online aggregation engine bindings";

  auto base = py::register_exception<Error>(m, "EdfError");
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", validation.ptr());
  py::register_exception<DomainError>(m, "DomainError", validation.ptr());
  py::register_exception<ExecutionError>(m, "ExecutionError", base.ptr());

  m.def("run_query", &run_query, py::arg("query_json"), py::arg("data_dir"), py::arg("seed") = py::none(),
        py::arg("ci_level") = py::none(), py::arg("sequential") = false,
        "Runs a query over table directories and returns one JSON line per snapshot.");
  m.def("exact_result", &exact_result, py::arg("query_json"), py::arg("data_dir"),
        "Exact answer of the query as one JSON line, checked against batch evaluation.");
  m.def("score_lines", &score_lines, py::arg("stream"), py::arg("exact"),
        "Scores snapshot lines against an exact line; one JSON line per snapshot.");
  m.def("write_suite", &write_suite, py::arg("out"), py::arg("seed") = 7,
        "Writes every benchmark workload under out/<name>/ and returns the names.");
  m.def("write_monomial", &write_monomial, py::arg("out"), py::arg("u") = 1.0, py::arg("v") = 0.0,
        py::arg("groups") = 8, py::arg("partitions") = 10, py::arg("rows") = 10000, py::arg("seed") = 1);
  m.def("write_deepquery", &write_deepquery, py::arg("out"), py::arg("depth") = 2, py::arg("rows") = 100000,
        py::arg("partitions") = 10, py::arg("seed") = 1);
  m.def("fit_growth", &fit_growth, py::arg("points"),
        "Fits mean group cardinality c t^w to (t, cardinality) points.");
  m.def("solve_distinct", &solve_distinct, py::arg("y"), py::arg("n"), py::arg("N"),
        "Method-of-moments distinct count for y distinct values among n of N rows.");
  m.def("chebyshev_k", &chebyshev_k, py::arg("delta"));
}
