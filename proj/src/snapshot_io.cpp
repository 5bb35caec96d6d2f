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

#include "edf/snapshot_io.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "edf/error.hpp"

namespace edf {
namespace {

using nlohmann::ordered_json;

ordered_json value_json(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::int64:
      return std::get<std::int64_t>(v);
    case ValueKind::float64: {
      double d = std::get<double>(v);
      if (!std::isfinite(d)) return nullptr;
      return d;
    }
    case ValueKind::utf8:
      return std::get<std::string>(v);
  }
  return nullptr;
}

ordered_json bound_json(double b) {
  if (!std::isfinite(b)) return nullptr;
  return b;
}

void put_rows(ordered_json& j, const RowBatch& rows) {
  const auto& schema = rows.schema();
  j["key"] = schema.primary_key();
  ordered_json cols = ordered_json::array();
  for (const auto& a : schema.attributes()) cols.push_back(a.name);
  j["columns"] = cols;
  ordered_json out = ordered_json::array();
  for (std::size_t r = 0; r < rows.row_count(); ++r) {
    ordered_json row = ordered_json::object();
    for (std::size_t c = 0; c < rows.column_count(); ++c) row[schema.at(c).name] = value_json(rows.value(c, r));
    out.push_back(std::move(row));
  }
  j["rows"] = std::move(out);
}

}  // namespace

std::string snapshot_to_json(const SnapshotRecord& s) {
  ordered_json j;
  j["index"] = s.index;
  j["t"] = s.t();
  j["processed"] = s.progress.processed;
  j["total"] = s.progress.total;
  j["wall_ms"] = std::chrono::duration<double, std::milli>(s.wall).count();
  put_rows(j, *s.rows);
  if (!s.ci.empty()) {
    ordered_json ci = ordered_json::object();
    for (const auto& col : s.ci) {
      ordered_json bounds = ordered_json::array();
      for (const auto& iv : col.rows) bounds.push_back({bound_json(iv.lo), bound_json(iv.hi)});
      ci[s.rows->schema().at(col.column).name] = std::move(bounds);
    }
    j["ci"] = std::move(ci);
  }
  return j.dump();
}

std::string exact_to_json(const RowBatch& rows) {
  ordered_json j;
  j["index"] = 0;
  j["t"] = 1.0;
  j["processed"] = 0;
  j["total"] = 0;
  j["wall_ms"] = 0.0;
  put_rows(j, rows);
  return j.dump();
}

ResultRecord parse_result_line(const std::string& line) {
  ResultRecord r;
  try {
    auto j = ordered_json::parse(line);
    r.index = j.value("index", std::size_t{0});
    r.t = j.value("t", 1.0);
    r.wall_ms = j.value("wall_ms", 0.0);
    r.key = j.at("key").get<std::vector<std::string>>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      std::map<std::string, Value> m;
      for (const auto& [name, v] : row.items()) {
        if (v.is_number_integer()) {
          m[name] = v.get<std::int64_t>();
        } else if (v.is_number()) {
          m[name] = v.get<double>();
        } else if (v.is_string()) {
          m[name] = v.get<std::string>();
        } else if (v.is_null()) {
          m[name] = std::numeric_limits<double>::quiet_NaN();
        } else {
          throw ValidationError("unsupported cell in result line: " + v.dump());
        }
      }
      r.rows.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed result line: ") + e.what());
  }
  return r;
}

std::vector<ResultRecord> read_result_stream(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_result_line(line));
  }
  return out;
}

}  // namespace edf
