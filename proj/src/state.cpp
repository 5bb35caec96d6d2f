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

#include "edf/state.hpp"

#include "edf/error.hpp"

namespace edf {

Partial Partial::from_batch(BatchPtr rows) {
  Partial p;
  auto pk = rows->schema().primary_key_indices();
  p.key_set.reserve(rows->row_count());
  for (std::size_t r = 0; r < rows->row_count(); ++r) {
    if (!p.key_set.insert(rows->key(r, pk)).second) {
      throw KeyOverlapError("duplicate primary key within a partial");
    }
  }
  p.rows = std::move(rows);
  return p;
}

void Version::check_disjoint() const {
  std::unordered_set<Key, KeyHash> seen;
  for (const auto& p : partials) {
    for (const auto& k : p.key_set) {
      if (!seen.insert(k).second) throw KeyOverlapError("partials of a version share a primary key");
    }
  }
}

IntrinsicState::IntrinsicState(SchemaPtr schema) : schema_(std::move(schema)) {}

const Version& IntrinsicState::latest_version() const {
  if (!latest_) throw EmptyStateError("state has no version");
  return *latest_;
}

RowBatch IntrinsicState::latest_state() const {
  const auto& v = latest_version();
  std::vector<const RowBatch*> parts;
  parts.reserve(v.partials.size());
  for (const auto& p : v.partials) parts.push_back(p.rows.get());
  return RowBatch::concat(schema_, parts);
}

void IntrinsicState::append_partial(Partial p) {
  if (!latest_) {
    latest_.emplace();
    ++version_count_;
  }
  for (const auto& k : p.key_set) {
    if (latest_keys_.count(k)) throw KeyOverlapError("partial overlaps keys of the latest version");
  }
  latest_keys_.insert(p.key_set.begin(), p.key_set.end());
  latest_->partials.push_back(std::move(p));
}

void IntrinsicState::push_version(Version v) {
  v.check_disjoint();
  latest_keys_.clear();
  for (const auto& p : v.partials) latest_keys_.insert(p.key_set.begin(), p.key_set.end());
  latest_ = std::move(v);
  ++version_count_;
}

}  // namespace edf
