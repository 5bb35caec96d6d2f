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

#include <cstdint>
#include <functional>

#include "edf/row_batch.hpp"
#include "edf/state.hpp"

namespace edf {

/// How a payload relates to the producer's previous output: an appended
/// partial (incremental update) or a new version (complete refresh).
enum class DeltaKind : std::uint8_t { append, replace };

struct Message {
  enum class Kind : std::uint8_t { append, replace, eof };

  Kind kind = Kind::eof;
  BatchPtr batch;  ///< shared and immutable; null for EOF
  Progress progress;
  std::int64_t partition = -1;  ///< source partition index that triggered it

  bool is_eof() const { return kind == Kind::eof; }

  static Message eof() { return {}; }
  static Message data(DeltaKind k, BatchPtr b, Progress p, std::int64_t partition) {
    return {k == DeltaKind::append ? Kind::append : Kind::replace, std::move(b), p, partition};
  }
};

using Emit = std::function<void(Message)>;

}  // namespace edf
