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

#include "edf/executor.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <numeric>
#include <thread>

#include "edf/error.hpp"

namespace edf {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

struct Envelope {
  std::size_t slot = 0;
  Message msg;
};

class Aborted : public std::exception {};

/// Bounded multi-producer inbox of one node.
class Inbox {
 public:
  explicit Inbox(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

  void push(Envelope e) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return aborted_ || queue_.size() < capacity_; });
    if (aborted_) throw Aborted();
    queue_.push_back(std::move(e));
    not_empty_.notify_one();
  }

  Envelope pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return aborted_ || !queue_.empty(); });
    if (aborted_) throw Aborted();
    Envelope e = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return e;
  }

  void abort() {
    std::lock_guard lock(mu_);
    aborted_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<Envelope> queue_;
  bool aborted_ = false;
};

struct Target {
  std::size_t node;
  std::size_t slot;
};

std::vector<std::vector<Target>> targets_of(const QueryGraph& graph) {
  std::vector<std::vector<Target>> out(graph.nodes().size());
  for (std::size_t c = 0; c < graph.nodes().size(); ++c) {
    const auto& inputs = graph.node(c).inputs;
    for (std::size_t k = 0; k < inputs.size(); ++k) out[inputs[k]].push_back({c, k});
  }
  return out;
}

const PartitionSource& source_for(const Bindings& b, const std::string& table) {
  auto it = b.sources.find(table);
  if (it == b.sources.end() || !it->second) throw ValidationError("table '" + table + "' is not bound");
  return *it->second;
}

/// Emits every partition of a reader node in binding order.
void run_reader(const GraphNode& node, const Bindings& bindings, TraceLog* trace, Clock::time_point start,
                const Emit& emit) {
  const auto& table = std::get<ReadParams>(node.spec.params).table;
  const auto& src = source_for(bindings, table);
  const auto& meta = src.meta();
  if (*meta.schema != *node.schema) throw ValidationError("table '" + table + "' changed schema since planning");
  auto order = bindings.order_of(table);
  if (order.empty()) {
    emit(Message::data(DeltaKind::append, std::make_shared<const RowBatch>(node.schema), Progress{0, 0}, -1));
    return;
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto t0 = since(start);
    auto batch = src.load(order[pos]);
    if (batch->schema_ptr() != node.schema) batch = std::make_shared<const RowBatch>(batch->with_schema(node.schema));
    auto progress = progress_after(meta, order, pos);
    if (trace) trace->record({node.spec.id, t0, since(start), static_cast<std::int64_t>(order[pos])});
    emit(Message::data(DeltaKind::append, std::move(batch), progress, static_cast<std::int64_t>(order[pos])));
  }
}

void check_bindings(const QueryGraph& graph, const Bindings& bindings) {
  for (const auto& t : graph.tables()) {
    const auto& meta = source_for(bindings, t).meta();
    auto order = bindings.order_of(t);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i || sorted.size() != meta.partitions.size()) {
        throw ValidationError("partition order of '" + t + "' is not a permutation");
      }
    }
  }
}

}  // namespace

std::map<std::string, SchemaPtr> Bindings::schemas() const {
  std::map<std::string, SchemaPtr> out;
  for (const auto& [name, src] : sources) out.emplace(name, src->meta().schema);
  return out;
}

std::vector<std::size_t> Bindings::order_of(const std::string& table) const {
  auto it = orders.find(table);
  if (it != orders.end()) return it->second;
  auto s = sources.find(table);
  if (s == sources.end()) throw ValidationError("table '" + table + "' is not bound");
  std::vector<std::size_t> order(s->second->meta().partitions.size());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

Bindings bind_directory(const std::filesystem::path& data_dir, const std::map<std::string, std::string>& tables) {
  Bindings b;
  for (const auto& [name, dir] : tables) {
    b.sources.emplace(name, std::make_shared<CsvPartitionSource>(load_meta(data_dir / dir)));
  }
  return b;
}

void TraceLog::record(TraceEntry e) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(e));
}

std::vector<TraceEntry> TraceLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

bool TraceLog::has_overlap() const {
  auto es = entries();
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.start_ns < b.start_ns; });
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size() && es[j].start_ns < es[i].end_ns; ++j) {
      if (es[j].node != es[i].node) return true;
    }
  }
  return false;
}

void TraceLog::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ExecutionError("cannot write trace " + path.string());
  out << "node start_ns end_ns partition\n";
  for (const auto& e : entries()) out << e.node << " " << e.start_ns << " " << e.end_ns << " " << e.partition << "\n";
}

SnapshotAssembler::SnapshotAssembler(SchemaPtr schema, std::optional<double> ci_delta)
    : state_(std::move(schema)), ci_delta_(ci_delta) {}

SnapshotRecord SnapshotAssembler::on_message(const Message& msg, std::chrono::nanoseconds wall) {
  if (msg.is_eof()) throw ExecutionError("EOF is not a snapshot");
  if (msg.kind == Message::Kind::replace) {
    Version v;
    v.partials.push_back(Partial::from_batch(msg.batch));
    state_.push_version(std::move(v));
  } else {
    state_.append_partial(Partial::from_batch(msg.batch));
  }
  SnapshotRecord rec;
  rec.index = next_index_++;
  rec.progress = msg.progress;
  rec.wall = wall;
  rec.rows = std::make_shared<const RowBatch>(state_.latest_state());
  if (ci_delta_) {
    const auto& rows = *rec.rows;
    for (std::size_t c = 0; c < rows.column_count(); ++c) {
      const auto& attr = rows.schema().at(c);
      if (attr.kind == ValueKind::utf8) continue;
      if (attr.mutability == Mutability::constant && !rows.has_uncertainty(c)) continue;
      ColumnIntervals ci;
      ci.column = c;
      for (std::size_t r = 0; r < rows.row_count(); ++r) {
        ci.rows.push_back(chebyshev_interval(rows.numeric(c, r), rows.variance(c, r), *ci_delta_));
        ci.unstable.push_back(rows.unstable(c, r) ? 1 : 0);
      }
      rec.ci.push_back(std::move(ci));
    }
  }
  return rec;
}

void run(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options, const SnapshotSink& sink) {
  check_bindings(graph, bindings);
  const auto start = Clock::now();
  const std::size_t n = graph.nodes().size();
  const auto targets = targets_of(graph);
  std::vector<std::unique_ptr<Inbox>> inboxes(n);
  for (std::size_t i = 0; i < n; ++i) inboxes[i] = std::make_unique<Inbox>(options.channel_capacity);
  SnapshotAssembler assembler(graph.output_node().schema, options.ci_delta);

  std::mutex err_mu;
  std::string first_error;
  auto abort_all = [&](const std::string& what) {
    {
      std::lock_guard lock(err_mu);
      if (first_error.empty()) first_error = what;
    }
    for (auto& in : inboxes) in->abort();
  };

  auto make_emit = [&](std::size_t i) -> Emit {
    if (i == graph.output()) {
      return [&](Message m) {
        sink(assembler.on_message(m, std::chrono::nanoseconds(since(start))));
      };
    }
    return [&, i](Message m) {
      for (const auto& t : targets[i]) inboxes[t.node]->push({t.slot, m});
    };
  };
  auto forward_eof = [&](std::size_t i) {
    for (const auto& t : targets[i]) inboxes[t.node]->push({t.slot, Message::eof()});
  };

  std::vector<std::thread> workers;
  workers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    workers.emplace_back([&, i] {
      const auto& node = graph.node(i);
      try {
        Emit emit = make_emit(i);
        if (node.spec.kind == NodeKind::read) {
          run_reader(node, bindings, options.trace, start, emit);
        } else {
          auto op = graph.make_operator(i, options.extrinsic);
          std::size_t open = op->arity();
          while (open > 0) {
            Envelope e = inboxes[i]->pop();
            if (e.msg.is_eof()) {
              op->finish_input(e.slot, emit);
              --open;
              continue;
            }
            auto t0 = since(start);
            op->consume(e.slot, e.msg, emit);
            if (options.trace) options.trace->record({node.spec.id, t0, since(start), e.msg.partition});
          }
        }
        forward_eof(i);
      } catch (const Aborted&) {
      } catch (const std::exception& ex) {
        abort_all("node '" + node.spec.id + "': " + ex.what());
      }
    });
  }
  for (auto& w : workers) w.join();
  if (!first_error.empty()) throw ExecutionError(first_error);
}

std::vector<SnapshotRecord> run(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options) {
  std::vector<SnapshotRecord> out;
  run(graph, bindings, options, [&](const SnapshotRecord& s) { out.push_back(s); });
  return out;
}

void run_sequential(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options,
                    const SnapshotSink& sink) {
  check_bindings(graph, bindings);
  const auto start = Clock::now();
  const std::size_t n = graph.nodes().size();
  SnapshotAssembler assembler(graph.output_node().schema, options.ci_delta);
  std::vector<std::vector<Message>> produced(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = graph.node(i);
    try {
      Emit emit;
      if (i == graph.output()) {
        emit = [&](Message m) { sink(assembler.on_message(m, std::chrono::nanoseconds(since(start)))); };
      } else {
        emit = [&, i](Message m) { produced[i].push_back(std::move(m)); };
      }
      if (node.spec.kind == NodeKind::read) {
        run_reader(node, bindings, options.trace, start, emit);
        continue;
      }
      auto op = graph.make_operator(i, options.extrinsic);
      // Higher slots (build / right side) first, then the driving input.
      for (std::size_t k = node.inputs.size(); k-- > 0;) {
        for (const auto& m : produced[node.inputs[k]]) {
          auto t0 = since(start);
          op->consume(k, m, emit);
          if (options.trace) options.trace->record({node.spec.id, t0, since(start), m.partition});
        }
        op->finish_input(k, emit);
      }
    } catch (const std::exception& ex) {
      throw ExecutionError("node '" + node.spec.id + "': " + ex.what());
    }
    // Inputs consumed by every consumer can be released.
    for (auto in : node.inputs) {
      const auto& consumers = graph.node(in).consumers;
      if (std::all_of(consumers.begin(), consumers.end(), [&](std::size_t c) { return c <= i; })) {
        produced[in].clear();
        produced[in].shrink_to_fit();
      }
    }
  }
}

std::vector<SnapshotRecord> run_sequential(const QueryGraph& graph, const Bindings& bindings,
                                           const RunOptions& options) {
  std::vector<SnapshotRecord> out;
  run_sequential(graph, bindings, options, [&](const SnapshotRecord& s) { out.push_back(s); });
  return out;
}

}  // namespace edf
