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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "edf/row_batch.hpp"

namespace edf {

/// Fraction of original input tuples processed, carried as an exact integer
/// ratio so that the last partition yields t == 1 without rounding.
struct Progress {
  std::uint64_t processed = 0;
  std::uint64_t total = 0;

  /// An empty input is complete from the start.
  double t() const {
    return total == 0 ? 1.0 : static_cast<double>(processed) / static_cast<double>(total);
  }
  bool operator==(const Progress&) const = default;
};

inline bool is_final(const Progress& p) { return p.processed == p.total; }
/// Real-valued form; true iff t == 1.
inline bool is_final(double t) { return t == 1.0; }

/// Monomial growth c * t^w of an EDF's tuple count.
struct GrowthSpec {
  double w = 1.0;
  double c = 0.0;
};

/// Key-disjoint slice of a version.
struct Partial {
  BatchPtr rows;
  std::unordered_set<Key, KeyHash> key_set;

  /// Builds the key set from the batch's primary key.
  static Partial from_batch(BatchPtr rows);
};

struct Version {
  std::vector<Partial> partials;

  /// Throws KeyOverlapError if two partials share a key.
  void check_disjoint() const;
};

/// Versions of partials. Only the newest version is retained; `version_count`
/// counts every version pushed so far.
class IntrinsicState {
 public:
  explicit IntrinsicState(SchemaPtr schema);

  const EdfSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  bool has_version() const { return latest_.has_value(); }
  std::size_t version_count() const { return version_count_; }
  const Version& latest_version() const;

  /// Concatenation of all partials of the newest version.
  RowBatch latest_state() const;

  /// Adds `p` to the newest version (creating an empty one first if needed).
  void append_partial(Partial p);
  /// Replaces the content with `v`.
  void push_version(Version v);

 private:
  SchemaPtr schema_;
  std::optional<Version> latest_;
  std::unordered_set<Key, KeyHash> latest_keys_;
  std::size_t version_count_ = 0;
};

}  // namespace edf
