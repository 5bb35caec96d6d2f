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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edf/value.hpp"

namespace edf {

enum class Mutability : std::uint8_t { constant, mutable_ };

std::string_view to_string(Mutability m);
Mutability parse_mutability(std::string_view text);

struct AttributeDef {
  std::string name;
  ValueKind kind = ValueKind::int64;
  Mutability mutability = Mutability::constant;

  bool is_mutable() const { return mutability == Mutability::mutable_; }
  bool operator==(const AttributeDef&) const = default;
};

/// Attribute list plus primary and clustering keys. Validated on construction:
/// names are unique, every key attribute exists and primary-key attributes are
/// constant.
class EdfSchema {
 public:
  EdfSchema(std::vector<AttributeDef> attributes, std::vector<std::string> primary_key,
            std::optional<std::vector<std::string>> clustering_key = std::nullopt);

  const std::vector<AttributeDef>& attributes() const { return attributes_; }
  const std::vector<std::string>& primary_key() const { return primary_key_; }
  const std::optional<std::vector<std::string>>& clustering_key() const { return clustering_key_; }

  std::size_t size() const { return attributes_.size(); }
  const AttributeDef& at(std::size_t i) const { return attributes_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Index of `name`; throws ValidationError("unknown attribute ...") if absent.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& names) const;

  std::vector<std::size_t> primary_key_indices() const { return indices_of(primary_key_); }

  bool has_mutable() const;
  bool operator==(const EdfSchema&) const = default;

  std::string to_string() const;

 private:
  std::vector<AttributeDef> attributes_;
  std::vector<std::string> primary_key_;
  std::optional<std::vector<std::string>> clustering_key_;
};

using SchemaPtr = std::shared_ptr<const EdfSchema>;

inline SchemaPtr make_schema(EdfSchema s) { return std::make_shared<const EdfSchema>(std::move(s)); }

}  // namespace edf
