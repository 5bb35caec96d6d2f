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
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edf {

enum class ValueKind : std::uint8_t { int64, float64, utf8 };

std::string_view to_string(ValueKind kind);
ValueKind parse_value_kind(std::string_view text);

/// A single cell. Alternative index matches ValueKind.
using Value = std::variant<std::int64_t, double, std::string>;

inline ValueKind kind_of(const Value& v) { return static_cast<ValueKind>(v.index()); }

/// Numeric view of a cell; throws ValidationError for strings.
double as_double(const Value& v);

std::string to_string(const Value& v);

/// Ordered tuple of key attribute values (primary, clustering or group key).
using Key = std::vector<Value>;

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept;
};

}  // namespace edf
