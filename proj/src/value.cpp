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

#include "edf/value.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "edf/error.hpp"

namespace edf {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::int64:
      return "int64";
    case ValueKind::float64:
      return "float64";
    case ValueKind::utf8:
      return "utf8";
  }
  return "?";
}

ValueKind parse_value_kind(std::string_view text) {
  if (text == "int64") return ValueKind::int64;
  if (text == "float64") return ValueKind::float64;
  if (text == "utf8") return ValueKind::utf8;
  throw ValidationError("unknown value kind '" + std::string(text) + "'");
}

double as_double(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::int64:
      return static_cast<double>(std::get<std::int64_t>(v));
    case ValueKind::float64:
      return std::get<double>(v);
    case ValueKind::utf8:
      break;
  }
  throw ValidationError("string value '" + std::get<std::string>(v) + "' used as a number");
}

std::string to_string(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::int64:
      return std::to_string(std::get<std::int64_t>(v));
    case ValueKind::float64: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(v));
      return std::string(buf, res.ptr);
    }
    case ValueKind::utf8:
      return std::get<std::string>(v);
  }
  return {};
}

std::size_t ValueHash::operator()(const Value& v) const noexcept {
  std::size_t seed = v.index() * 0x9e3779b97f4a7c15ULL;
  switch (kind_of(v)) {
    case ValueKind::int64:
      return seed ^ std::hash<std::int64_t>{}(std::get<std::int64_t>(v));
    case ValueKind::float64: {
      double d = std::get<double>(v);
      if (d == 0.0) d = 0.0;  // -0.0 == 0.0 must hash alike
      return seed ^ std::hash<double>{}(d);
    }
    case ValueKind::utf8:
      return seed ^ std::hash<std::string>{}(std::get<std::string>(v));
  }
  return seed;
}

std::size_t KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  ValueHash vh;
  for (const auto& v : k) {
    h ^= vh(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace edf
