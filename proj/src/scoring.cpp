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

#include "edf/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "edf/error.hpp"

namespace edf {
namespace {

Key key_of(const std::map<std::string, Value>& row, const std::vector<std::string>& key) {
  Key k;
  k.reserve(key.size());
  for (const auto& name : key) {
    auto it = row.find(name);
    if (it == row.end()) throw ValidationError("result row lacks key column '" + name + "'");
    k.push_back(it->second);
  }
  return k;
}

bool numeric(const Value& v) { return kind_of(v) != ValueKind::utf8; }

}  // namespace

SnapshotScore score_snapshot(const ResultRecord& estimate, const ResultRecord& exact) {
  if (estimate.key != exact.key || estimate.columns != exact.columns) {
    throw ValidationError("estimate and exact results have different keys or columns");
  }
  SnapshotScore s;
  s.index = estimate.index;
  s.t = estimate.t;
  s.wall_ms = estimate.wall_ms;

  std::map<Key, const std::map<std::string, Value>*> truth;
  for (const auto& row : exact.rows) truth[key_of(row, exact.key)] = &row;

  double ape = 0.0;
  std::size_t ape_cells = 0;
  double ae = 0.0;
  for (const auto& row : estimate.rows) {
    auto it = truth.find(key_of(row, exact.key));
    if (it == truth.end()) continue;
    ++s.matched_groups;
    for (const auto& [name, tv] : *it->second) {
      if (std::find(exact.key.begin(), exact.key.end(), name) != exact.key.end()) continue;
      auto ev = row.find(name);
      if (ev == row.end() || !numeric(tv) || !numeric(ev->second)) continue;
      double t = as_double(tv);
      double e = as_double(ev->second);
      ++s.cells;
      ae += std::abs(e - t);
      if (t == 0.0) {
        ++s.zero_cells;
      } else {
        ape += std::abs(e - t) / std::abs(t);
        ++ape_cells;
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.mape = ape_cells ? 100.0 * ape / static_cast<double>(ape_cells) : nan;
  s.mae = s.cells ? ae / static_cast<double>(s.cells) : nan;
  s.recall = exact.rows.empty() ? 100.0
                                : 100.0 * static_cast<double>(s.matched_groups) / static_cast<double>(exact.rows.size());
  s.precision = estimate.rows.empty()
                    ? 100.0
                    : 100.0 * static_cast<double>(s.matched_groups) / static_cast<double>(estimate.rows.size());
  return s;
}

AccuracyReport score(const std::vector<ResultRecord>& stream, const ResultRecord& exact) {
  AccuracyReport r;
  for (const auto& rec : stream) r.snapshots.push_back(score_snapshot(rec, exact));
  return r;
}

std::string to_json(const SnapshotScore& s) {
  nlohmann::ordered_json j;
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  j["index"] = s.index;
  j["t"] = s.t;
  j["wall_ms"] = s.wall_ms;
  j["mape"] = num(s.mape);
  j["mae"] = num(s.mae);
  j["recall"] = s.recall;
  j["precision"] = s.precision;
  j["matched_groups"] = s.matched_groups;
  j["cells"] = s.cells;
  j["zero_cells"] = s.zero_cells;
  return j.dump();
}

}  // namespace edf
