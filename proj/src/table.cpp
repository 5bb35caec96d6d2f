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

#include "edf/table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "edf/error.hpp"

namespace edf {
namespace {

std::string where(const std::filesystem::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line) + ": ";
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Splits one CSV record. Quoted fields may contain separators and doubled quotes.
bool split_record(const std::string& line, std::vector<std::string>& fields, std::vector<bool>& quoted) {
  fields.clear();
  quoted.clear();
  std::string cur;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      quoted.push_back(was_quoted);
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  quoted.push_back(was_quoted);
  return !in_quotes;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && !s.empty()) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

TableMeta load_meta(const std::filesystem::path& dir) {
  auto path = dir / "meta";
  std::ifstream in(path);
  if (!in) throw ValidationError("missing metadata file " + path.string());
  TableMeta meta;
  meta.directory = dir;
  std::vector<AttributeDef> attrs;
  std::optional<std::vector<std::string>> pk;
  std::optional<std::vector<std::string>> ck;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string directive;
    ls >> directive;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    auto need = [&](std::size_t n) {
      if (args.size() != n) throw ParseError(where(path, lineno) + "'" + directive + "' takes " + std::to_string(n) + " values");
    };
    try {
      if (directive == "name") {
        need(1);
        meta.name = args[0];
      } else if (directive == "attribute") {
        if (args.size() == 1) args = split(args[0], ':');
        need(3);
        attrs.push_back({args[0], parse_value_kind(args[1]), parse_mutability(args[2])});
      } else if (directive == "primary_key") {
        need(1);
        pk = split(args[0], ',');
      } else if (directive == "clustering_key") {
        need(1);
        ck = split(args[0], ',');
      } else if (directive == "partition") {
        need(2);
        std::uint64_t rows = 0;
        auto [p, ec] = std::from_chars(args[1].data(), args[1].data() + args[1].size(), rows);
        if (ec != std::errc() || p != args[1].data() + args[1].size()) {
          throw ParseError(where(path, lineno) + "bad row count '" + args[1] + "'");
        }
        if (rows == 0) throw ParseError(where(path, lineno) + "partition '" + args[0] + "' has no rows");
        meta.partitions.push_back({args[0], rows});
        meta.total_rows += rows;
      } else {
        throw ParseError(where(path, lineno) + "unknown directive '" + directive + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(where(path, lineno) + e.what());
    }
  }
  if (meta.name.empty()) meta.name = dir.filename().string();
  if (!pk) throw ParseError(path.string() + ": missing primary_key");
  try {
    meta.schema = make_schema(EdfSchema(std::move(attrs), std::move(*pk), std::move(ck)));
  } catch (const ValidationError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return meta;
}

void write_meta(const TableMeta& meta) {
  std::filesystem::create_directories(meta.directory);
  std::ofstream out(meta.directory / "meta");
  if (!out) throw ExecutionError("cannot write " + (meta.directory / "meta").string());
  const auto& s = *meta.schema;
  out << "name " << meta.name << "\n";
  for (const auto& a : s.attributes()) {
    out << "attribute " << a.name << ":" << to_string(a.kind) << ":" << to_string(a.mutability) << "\n";
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string r;
    for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + v[i];
    return r;
  };
  out << "primary_key " << join(s.primary_key()) << "\n";
  if (s.clustering_key()) out << "clustering_key " << join(*s.clustering_key()) << "\n";
  for (const auto& p : meta.partitions) out << "partition " << p.file.string() << " " << p.row_count << "\n";
}

RowBatch read_csv(const std::filesystem::path& file, SchemaPtr schema) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("missing partition file " + file.string());
  std::string line;
  std::vector<std::string> fields;
  std::vector<bool> quoted;
  if (!std::getline(in, line)) throw ParseError(where(file, 1) + "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  split_record(line, fields, quoted);
  if (fields.size() != schema->size()) {
    throw ParseError(where(file, 1) + "header has " + std::to_string(fields.size()) + " columns, schema " +
                     std::to_string(schema->size()));
  }
  std::vector<std::size_t> target(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto idx = schema->find(fields[i]);
    if (!idx) throw ParseError(where(file, 1) + "unknown column '" + fields[i] + "'");
    target[i] = *idx;
  }
  std::vector<Column> cols;
  for (const auto& a : schema->attributes()) cols.push_back(make_column(a.kind));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!split_record(line, fields, quoted)) throw ParseError(where(file, lineno) + "unterminated quote");
    if (fields.size() != target.size()) {
      throw ParseError(where(file, lineno) + "expected " + std::to_string(target.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& f = fields[i];
      auto& col = cols[target[i]];
      const auto& attr = schema->at(target[i]);
      if (f.empty() && !quoted[i]) throw ParseError(where(file, lineno) + "empty cell in column '" + attr.name + "'");
      const char* b = f.data();
      const char* e = f.data() + f.size();
      switch (attr.kind) {
        case ValueKind::int64: {
          std::int64_t v = 0;
          auto [p, ec] = std::from_chars(b, e, v);
          if (ec != std::errc() || p != e) {
            throw ParseError(where(file, lineno) + "bad int64 '" + f + "' in column '" + attr.name + "'");
          }
          std::get<Int64Column>(col).push_back(v);
          break;
        }
        case ValueKind::float64: {
          double v = 0;
          auto [p, ec] = std::from_chars(b, e, v);
          if (ec != std::errc() || p != e) {
            throw ParseError(where(file, lineno) + "bad float64 '" + f + "' in column '" + attr.name + "'");
          }
          std::get<Float64Column>(col).push_back(v);
          break;
        }
        case ValueKind::utf8:
          std::get<Utf8Column>(col).push_back(f);
          break;
      }
    }
  }
  return RowBatch(std::move(schema), std::move(cols));
}

void write_csv(const std::filesystem::path& file, const RowBatch& batch) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ExecutionError("cannot write " + file.string());
  const auto& s = batch.schema();
  for (std::size_t c = 0; c < s.size(); ++c) out << (c ? "," : "") << csv_field(s.at(c).name);
  out << "\n";
  for (std::size_t r = 0; r < batch.row_count(); ++r) {
    for (std::size_t c = 0; c < s.size(); ++c) {
      if (c) out << ",";
      if (s.at(c).kind == ValueKind::utf8) {
        out << csv_field(std::get<Utf8Column>(batch.column(c))[r]);
      } else {
        out << to_string(batch.value(c, r));
      }
    }
    out << "\n";
  }
}

std::pair<RowBatch, Progress> read_partition(const TableMeta& meta, std::size_t index) {
  if (index >= meta.partitions.size()) {
    throw ValidationError("partition " + std::to_string(index) + " out of range for table '" + meta.name + "'");
  }
  const auto& p = meta.partitions[index];
  auto batch = read_csv(meta.directory / p.file, meta.schema);
  if (batch.row_count() != p.row_count) {
    throw ParseError((meta.directory / p.file).string() + ": row-count mismatch: metadata declares " +
                     std::to_string(p.row_count) + " rows, file has " + std::to_string(batch.row_count()));
  }
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i <= index; ++i) cum += meta.partitions[i].row_count;
  return {std::move(batch), Progress{cum, meta.total_rows}};
}

Progress progress_after(const TableMeta& meta, std::span<const std::size_t> order, std::size_t position) {
  if (position >= order.size()) throw ValidationError("progress position out of range");
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i <= position; ++i) cum += meta.partitions.at(order[i]).row_count;
  return {cum, meta.total_rows};
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (seed == 0 || n < 2) return order;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

std::vector<std::size_t> shuffle_order(const TableMeta& meta, std::uint64_t seed, bool force) {
  if (seed != 0 && meta.clustered() && !force) {
    throw ValidationError("refusing to shuffle clustered table '" + meta.name + "'");
  }
  return seeded_permutation(meta.partitions.size(), seed);
}

BatchPtr CsvPartitionSource::load(std::size_t index) const {
  return std::make_shared<const RowBatch>(read_partition(meta_, index).first);
}

CachedPartitionSource::CachedPartitionSource(TableMeta meta) : meta_(std::move(meta)) {
  cache_.resize(meta_.partitions.size());
}

CachedPartitionSource::CachedPartitionSource(TableMeta meta, std::vector<BatchPtr> partitions)
    : meta_(std::move(meta)), cache_(std::move(partitions)) {
  if (cache_.size() != meta_.partitions.size()) throw ValidationError("partition count does not match metadata");
}

BatchPtr CachedPartitionSource::load(std::size_t index) const {
  if (index >= cache_.size()) {
    throw ValidationError("partition " + std::to_string(index) + " out of range for table '" + meta_.name + "'");
  }
  std::lock_guard lock(mu_);
  auto& slot = cache_[index];
  if (!slot) slot = std::make_shared<const RowBatch>(read_partition(meta_, index).first);
  return slot;
}

TableMeta make_memory_meta(std::string name, SchemaPtr schema, std::span<const BatchPtr> partitions) {
  TableMeta meta;
  meta.name = std::move(name);
  meta.schema = std::move(schema);
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    meta.partitions.push_back({"memory:" + std::to_string(i), partitions[i]->row_count()});
    meta.total_rows += partitions[i]->row_count();
  }
  return meta;
}

TableMeta write_table(const std::filesystem::path& dir, const std::string& name, SchemaPtr schema,
                      std::span<const RowBatch> partitions) {
  std::filesystem::create_directories(dir);
  TableMeta meta;
  meta.name = name;
  meta.schema = std::move(schema);
  meta.directory = dir;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (partitions[i].empty()) continue;
    char file[32];
    std::snprintf(file, sizeof(file), "part-%05zu.csv", meta.partitions.size());
    write_csv(dir / file, partitions[i]);
    meta.partitions.push_back({file, partitions[i].row_count()});
    meta.total_rows += partitions[i].row_count();
  }
  write_meta(meta);
  return meta;
}

}  // namespace edf
