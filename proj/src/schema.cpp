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

#include "edf/schema.hpp"

#include <sstream>
#include <unordered_set>

#include "edf/error.hpp"

namespace edf {

std::string_view to_string(Mutability m) { return m == Mutability::constant ? "constant" : "mutable"; }

Mutability parse_mutability(std::string_view text) {
  if (text == "constant") return Mutability::constant;
  if (text == "mutable") return Mutability::mutable_;
  throw ValidationError("unknown mutability '" + std::string(text) + "'");
}

EdfSchema::EdfSchema(std::vector<AttributeDef> attributes, std::vector<std::string> primary_key,
                     std::optional<std::vector<std::string>> clustering_key)
    : attributes_(std::move(attributes)),
      primary_key_(std::move(primary_key)),
      clustering_key_(std::move(clustering_key)) {
  std::unordered_set<std::string> names;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw ValidationError("empty attribute name");
    if (!names.insert(a.name).second) throw ValidationError("duplicate attribute '" + a.name + "'");
  }
  std::unordered_set<std::string> seen;
  for (const auto& k : primary_key_) {
    const auto& attr = attributes_[index_of(k)];
    if (attr.is_mutable()) throw ValidationError("primary-key attribute '" + k + "' is mutable");
    if (!seen.insert(k).second) throw ValidationError("primary key repeats '" + k + "'");
  }
  if (clustering_key_) {
    if (clustering_key_->empty()) throw ValidationError("empty clustering key");
    for (const auto& k : *clustering_key_) index_of(k);
  }
}

std::optional<std::size_t> EdfSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t EdfSchema::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw ValidationError("unknown attribute '" + std::string(name) + "'");
  return *i;
}

std::vector<std::size_t> EdfSchema::indices_of(const std::vector<std::string>& names) const {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(index_of(n));
  return out;
}

bool EdfSchema::has_mutable() const {
  for (const auto& a : attributes_) {
    if (a.is_mutable()) return true;
  }
  return false;
}

std::string EdfSchema::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    const auto& a = attributes_[i];
    if (i) os << ", ";
    os << a.name << ":" << edf::to_string(a.kind) << ":" << edf::to_string(a.mutability);
  }
  os << ") pk=[";
  for (std::size_t i = 0; i < primary_key_.size(); ++i) os << (i ? "," : "") << primary_key_[i];
  os << "]";
  if (clustering_key_) {
    os << " ck=[";
    for (std::size_t i = 0; i < clustering_key_->size(); ++i) os << (i ? "," : "") << (*clustering_key_)[i];
    os << "]";
  }
  return os.str();
}

}  // namespace edf
