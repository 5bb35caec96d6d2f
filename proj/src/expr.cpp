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

#include "edf/expr.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "edf/confidence.hpp"
#include "edf/error.hpp"

namespace edf {
namespace {

struct FnInfo {
  std::size_t arity;
  bool integral_ok;  ///< int64 in, int64 out
};

const std::map<std::string, FnInfo, std::less<>>& functions() {
  static const std::map<std::string, FnInfo, std::less<>> fns = {
      {"col", {1, true}},  {"add", {2, true}},   {"sub", {2, true}},           {"mul", {2, true}},
      {"div", {2, false}}, {"neg", {1, true}},   {"abs", {1, true}},           {"square", {1, true}},
      {"sqrt", {1, false}}, {"mul_one_minus", {2, false}}, {"if_prefix", {3, true}},
  };
  return fns;
}

bool is_integral_literal(double v) { return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15; }

double apply_double(std::string_view fn, const double* a) {
  if (fn == "col") return a[0];
  if (fn == "add") return a[0] + a[1];
  if (fn == "sub") return a[0] - a[1];
  if (fn == "mul") return a[0] * a[1];
  if (fn == "div") return a[0] / a[1];
  if (fn == "neg") return -a[0];
  if (fn == "abs") return std::abs(a[0]);
  if (fn == "square") return a[0] * a[0];
  if (fn == "sqrt") return std::sqrt(a[0]);
  if (fn == "mul_one_minus") return a[0] * (1.0 - a[1]);
  throw ValidationError("unknown function '" + std::string(fn) + "'");
}

std::int64_t apply_int(std::string_view fn, const std::int64_t* a) {
  if (fn == "col") return a[0];
  if (fn == "add") return a[0] + a[1];
  if (fn == "sub") return a[0] - a[1];
  if (fn == "mul") return a[0] * a[1];
  if (fn == "neg") return -a[0];
  if (fn == "abs") return a[0] < 0 ? -a[0] : a[0];
  if (fn == "square") return a[0] * a[0];
  throw ValidationError("function '" + std::string(fn) + "' has no integer form");
}

}  // namespace

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::eq:
      return "==";
    case CompareOp::ne:
      return "!=";
    case CompareOp::lt:
      return "<";
    case CompareOp::le:
      return "<=";
    case CompareOp::gt:
      return ">";
    case CompareOp::ge:
      return ">=";
    case CompareOp::starts_with:
      return "starts_with";
  }
  return "?";
}

CompareOp parse_compare_op(std::string_view text) {
  for (auto op : {CompareOp::eq, CompareOp::ne, CompareOp::lt, CompareOp::le, CompareOp::gt, CompareOp::ge,
                  CompareOp::starts_with}) {
    if (to_string(op) == text) return op;
  }
  if (text == "=") return CompareOp::eq;
  throw ValidationError("unknown comparison '" + std::string(text) + "'");
}

std::vector<std::string> Predicate::columns() const {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.column);
  return out;
}

BoundPredicate::BoundPredicate(const Predicate& p, const EdfSchema& schema) {
  for (const auto& t : p.terms) {
    std::size_t c = schema.index_of(t.column);
    const auto& attr = schema.at(c);
    bool text_col = attr.kind == ValueKind::utf8;
    bool text_lit = kind_of(t.literal) == ValueKind::utf8;
    if (text_col != text_lit) {
      throw ValidationError("predicate compares '" + t.column + "' (" + std::string(to_string(attr.kind)) +
                            ") with " + std::string(to_string(kind_of(t.literal))) + " literal");
    }
    if (t.op == CompareOp::starts_with && !text_col) {
      throw ValidationError("starts_with needs a utf8 attribute, '" + t.column + "' is not");
    }
    references_mutable_ = references_mutable_ || attr.is_mutable();
    terms_.push_back({c, t.op, t.literal});
  }
}

bool BoundPredicate::operator()(const RowBatch& batch, std::size_t row) const {
  for (const auto& t : terms_) {
    int cmp;
    const auto& col = batch.column(t.column);
    if (const auto* s = std::get_if<Utf8Column>(&col)) {
      const auto& v = (*s)[row];
      const auto& lit = std::get<std::string>(t.literal);
      if (t.op == CompareOp::starts_with) {
        if (v.compare(0, lit.size(), lit) != 0) return false;
        continue;
      }
      cmp = v.compare(lit);
    } else if (const auto* i = std::get_if<Int64Column>(&col);
               i && kind_of(t.literal) == ValueKind::int64) {
      auto a = (*i)[row];
      auto b = std::get<std::int64_t>(t.literal);
      cmp = a < b ? -1 : (a > b ? 1 : 0);
    } else {
      double a = batch.numeric(t.column, row);
      double b = as_double(t.literal);
      cmp = a < b ? -1 : (a > b ? 1 : 0);
    }
    bool ok = false;
    switch (t.op) {
      case CompareOp::eq:
        ok = cmp == 0;
        break;
      case CompareOp::ne:
        ok = cmp != 0;
        break;
      case CompareOp::lt:
        ok = cmp < 0;
        break;
      case CompareOp::le:
        ok = cmp <= 0;
        break;
      case CompareOp::gt:
        ok = cmp > 0;
        break;
      case CompareOp::ge:
        ok = cmp >= 0;
        break;
      case CompareOp::starts_with:
        break;
    }
    if (!ok) return false;
  }
  return true;
}

CompiledMap::CompiledMap(const MapSpec& spec, const EdfSchema& input) : input_width_(input.size()) {
  // Working set: input attributes followed by expression outputs.
  std::vector<AttributeDef> work = input.attributes();
  auto lookup = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i].name == name) return i;
    }
    throw ValidationError("unknown attribute '" + name + "'");
  };

  for (const auto& e : spec.exprs) {
    auto fit = functions().find(e.fn);
    if (fit == functions().end()) throw ValidationError("unknown map function '" + e.fn + "'");
    if (e.args.size() != fit->second.arity) {
      throw ValidationError("'" + e.fn + "' takes " + std::to_string(fit->second.arity) + " arguments, got " +
                            std::to_string(e.args.size()));
    }
    if (e.output.empty()) throw ValidationError("map expression without an output name");
    for (const auto& a : work) {
      if (a.name == e.output) throw ValidationError("map output '" + e.output + "' already exists");
    }
    BoundExpr be;
    be.fn = e.fn;
    bool integral = fit->second.integral_ok;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const auto& a = e.args[i];
      BoundArg b;
      b.kind = a.kind;
      bool want_text = e.fn == "if_prefix" && i < 2;
      switch (a.kind) {
        case ExprArg::Kind::column: {
          b.column = lookup(a.name);
          const auto& attr = work[b.column];
          if (want_text && i == 1) throw ValidationError("if_prefix expects a text prefix");
          if (want_text != (attr.kind == ValueKind::utf8)) {
            throw ValidationError("argument '" + a.name + "' of '" + e.fn + "' has the wrong kind");
          }
          b.integral = attr.kind == ValueKind::int64;
          b.is_mutable = attr.is_mutable();
          break;
        }
        case ExprArg::Kind::number:
          if (want_text) throw ValidationError("'" + e.fn + "' expects text for argument " + std::to_string(i));
          b.number = a.number;
          b.integral = is_integral_literal(a.number);
          break;
        case ExprArg::Kind::text:
          if (!want_text || i == 0) {
            throw ValidationError("unexpected text argument for '" + e.fn + "'");
          }
          b.text = a.name;
          break;
      }
      bool numeric_slot = !(e.fn == "if_prefix" && i < 2);
      if (numeric_slot && !b.integral) integral = false;
      be.is_mutable = be.is_mutable || b.is_mutable;
      be.args.push_back(std::move(b));
    }
    if (e.fn == "col" && be.args[0].kind == ExprArg::Kind::column) {
      be.kind = work[be.args[0].column].kind;
    } else {
      be.kind = integral ? ValueKind::int64 : ValueKind::float64;
    }
    references_mutable_ = references_mutable_ || be.is_mutable;
    work.push_back({e.output, be.kind, be.is_mutable ? Mutability::mutable_ : Mutability::constant});
    exprs_.push_back(std::move(be));
  }

  std::vector<std::string> kept_names;
  if (spec.keep) {
    std::unordered_set<std::string> seen;
    for (const auto& n : *spec.keep) {
      if (!seen.insert(n).second) throw ValidationError("keep lists '" + n + "' twice");
      keep_.push_back(input.index_of(n));
    }
  } else {
    for (std::size_t i = 0; i < input.size(); ++i) keep_.push_back(i);
  }
  for (std::size_t i = 0; i < exprs_.size(); ++i) keep_.push_back(input_width_ + i);

  std::vector<AttributeDef> out;
  std::unordered_set<std::string> out_names;
  for (auto i : keep_) {
    out.push_back(work[i]);
    out_names.insert(work[i].name);
  }
  for (const auto& k : input.primary_key()) {
    if (!out_names.count(k)) throw ValidationError("map drops primary-key attribute '" + k + "'");
  }
  auto ck = input.clustering_key();
  if (ck) {
    for (const auto& k : *ck) {
      if (!out_names.count(k)) {
        ck.reset();
        break;
      }
    }
  }
  output_ = make_schema(EdfSchema(std::move(out), input.primary_key(), ck));
}

RowBatch CompiledMap::operator()(const RowBatch& input) const {
  if (input.column_count() != input_width_) throw ValidationError("map input has the wrong arity");
  const std::size_t rows = input.row_count();
  std::vector<Column> work(input.columns().begin(), input.columns().end());
  std::vector<ColumnUncertainty> unc(input.uncertainty().begin(), input.uncertainty().end());
  work.reserve(input_width_ + exprs_.size());
  unc.reserve(input_width_ + exprs_.size());

  auto number_at = [&](const BoundArg& a, std::size_t r) -> double {
    if (a.kind == ExprArg::Kind::number) return a.number;
    const auto& c = work[a.column];
    if (const auto* i = std::get_if<Int64Column>(&c)) return static_cast<double>((*i)[r]);
    return std::get<Float64Column>(c)[r];
  };
  auto int_at = [&](const BoundArg& a, std::size_t r) -> std::int64_t {
    if (a.kind == ExprArg::Kind::number) return static_cast<std::int64_t>(a.number);
    return std::get<Int64Column>(work[a.column])[r];
  };
  auto variance_at = [&](const BoundArg& a, std::size_t r) -> double {
    if (a.kind != ExprArg::Kind::column || unc[a.column].empty()) return 0.0;
    return unc[a.column].variance[r];
  };
  auto unstable_at = [&](const BoundArg& a, std::size_t r) -> bool {
    return a.kind == ExprArg::Kind::column && !unc[a.column].empty() && unc[a.column].unstable[r] != 0;
  };

  for (const auto& e : exprs_) {
    Column out = make_column(e.kind);
    ColumnUncertainty out_unc;
    const bool prefix = e.fn == "if_prefix";
    // Numeric arguments: all of them, or only the value of if_prefix.
    const std::size_t first_num = prefix ? 2 : 0;
    const std::size_t n_num = e.args.size() - first_num;
    bool carries_variance = false;
    for (std::size_t i = first_num; i < e.args.size(); ++i) {
      const auto& a = e.args[i];
      if (a.kind == ExprArg::Kind::column && !unc[a.column].empty()) carries_variance = true;
    }
    if (e.kind == ValueKind::utf8) {
      auto& dst = std::get<Utf8Column>(out);
      dst = std::get<Utf8Column>(work[e.args[0].column]);
    } else {
      std::vector<double> args(n_num);
      for (std::size_t r = 0; r < rows; ++r) {
        bool take = true;
        if (prefix) {
          const auto& text = std::get<Utf8Column>(work[e.args[0].column])[r];
          take = text.compare(0, e.args[1].text.size(), e.args[1].text) == 0;
        }
        if (e.kind == ValueKind::int64) {
          std::int64_t v = 0;
          if (prefix) {
            v = take ? int_at(e.args[2], r) : 0;
          } else {
            std::int64_t iargs[2] = {0, 0};
            for (std::size_t i = 0; i < n_num; ++i) iargs[i] = int_at(e.args[i], r);
            v = apply_int(e.fn, iargs);
          }
          std::get<Int64Column>(out).push_back(v);
        } else {
          for (std::size_t i = 0; i < n_num; ++i) args[i] = number_at(e.args[first_num + i], r);
          double v = prefix ? (take ? args[0] : 0.0) : apply_double(e.fn, args.data());
          if (e.fn == "div" && args[1] == 0.0) throw ExecutionError("division by zero in map output");
          std::get<Float64Column>(out).push_back(v);
        }
      }
    }
    if (carries_variance) {
      out_unc.variance.assign(rows, 0.0);
      out_unc.unstable.assign(rows, 0);
      std::vector<double> point(n_num);
      UncertaintyCell sigma;
      sigma.variance.resize(n_num);
      for (std::size_t r = 0; r < rows; ++r) {
        bool any = false;
        bool unstable = false;
        for (std::size_t i = 0; i < n_num; ++i) {
          const auto& a = e.args[first_num + i];
          point[i] = number_at(a, r);
          sigma.variance[i] = variance_at(a, r);
          any = any || sigma.variance[i] != 0.0;
          unstable = unstable || unstable_at(a, r);
        }
        if (any) {
          bool take = true;
          if (prefix) {
            const auto& text = std::get<Utf8Column>(work[e.args[0].column])[r];
            take = text.compare(0, e.args[1].text.size(), e.args[1].text) == 0;
          }
          VectorFn f = [&](std::span<const double> u) -> std::vector<double> {
            if (prefix) return {take ? u[0] : 0.0};
            return {apply_double(e.fn, u.data())};
          };
          auto cell = propagate_map(f, point, sigma);
          out_unc.variance[r] = std::max(0.0, cell.variance[0]);
          unstable = unstable || cell.unstable;
        }
        out_unc.unstable[r] = unstable ? 1 : 0;
      }
    }
    work.push_back(std::move(out));
    unc.push_back(std::move(out_unc));
  }

  std::vector<Column> cols;
  std::vector<ColumnUncertainty> out_unc;
  cols.reserve(keep_.size());
  for (auto i : keep_) {
    cols.push_back(work[i]);
    out_unc.push_back(unc[i]);
  }
  return RowBatch(output_, std::move(cols), std::move(out_unc));
}

}  // namespace edf
