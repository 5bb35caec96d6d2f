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

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "edf/query_graph.hpp"

namespace edf {

/// Query description file: graph plus table bindings (name -> directory
/// relative to the data directory).
///
///     {
///       "tables": {"students": "students"},
///       "nodes": [
///         {"id": "s", "op": "read", "table": "students"},
///         {"id": "c", "op": "agg", "inputs": ["s"], "by": ["state"],
///          "aggs": [{"fn": "count"}]}
///       ],
///       "output": "c"
///     }
///
/// Map expression arguments are column names, numbers or {"str": "..."} for
/// text literals. Join keys are [probe, build] pairs.
struct QuerySpecFile {
  QueryGraphSpec graph;
  std::map<std::string, std::string> tables;
};

QuerySpecFile parse_query_spec(const std::string& json_text);
QuerySpecFile load_query_spec(const std::filesystem::path& path);
std::string to_json(const QuerySpecFile& spec);

}  // namespace edf
