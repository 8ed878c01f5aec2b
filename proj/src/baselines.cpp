// Copyright 2026 The BNRO Concentrator Authors
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

#include "bnro/baselines.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "bnro/engine.hpp"

namespace bnro {
namespace {

using Key = std::pair<std::uint32_t, std::uint64_t>;  // (source, payload)

std::size_t trace_width(const Trace& trace) {
  return trace.empty() ? 0 : trace.front().size();
}

// Packs words one at a time into fixed-width records.
class RecordPacker {
 public:
  explicit RecordPacker(std::size_t width) : width_(width), current_(width) {}

  void push(const DataWord& w, std::uint64_t cycle) {
    current_.slots[current_.occupancy++] = w;
    if (current_.complete()) close(cycle);
  }

  void emit_whole(OutputRecord rec, std::uint64_t cycle) {
    for (std::size_t i = 0; i < rec.occupancy; ++i) {
      out_.emissions.push_back({*rec.slots[i], cycle});
    }
    out_.records.push_back(std::move(rec));
  }

  void finish(std::uint64_t cycle) {
    if (current_.occupancy > 0) close(cycle);
  }

  struct Output {
    std::vector<OutputRecord> records;
    std::vector<Emission> emissions;
  };
  Output& output() { return out_; }

 private:
  void close(std::uint64_t cycle) {
    OutputRecord rec = std::move(current_);
    current_ = OutputRecord(width_);
    emit_whole(std::move(rec), cycle);
  }

  std::size_t width_;
  OutputRecord current_;
  Output out_;
};

BaselineResult finish_result(const Trace& trace, RecordPacker::Output&& out,
                             std::uint64_t overruns = 0) {
  BaselineResult result;
  result.metrics = measure_ordering(trace, out.emissions);
  result.metrics.overruns = overruns;
  result.records = std::move(out.records);
  return result;
}

}  // namespace

OrderingMetrics measure_ordering(const Trace& trace,
                                 const std::vector<Emission>& emitted) {
  OrderingMetrics m;
  m.per_channel_max_wait.assign(trace_width(trace), 0);

  struct Arrival {
    std::uint64_t rank;
    std::uint64_t cycle;
  };
  std::map<Key, std::deque<Arrival>> arrivals;
  std::uint64_t rank = 0;
  for (std::uint64_t c = 0; c < trace.size(); ++c) {
    for (const DataWord& w : trace[c]) {
      if (w.is_daq()) arrivals[{w.source_id, w.payload}].push_back({rank++, c});
    }
  }

  long double latency_sum = 0;
  for (std::uint64_t pos = 0; pos < emitted.size(); ++pos) {
    const DataWord& w = emitted[pos].word;
    auto it = arrivals.find({w.source_id, w.payload});
    if (it == arrivals.end() || it->second.empty()) {
      throw std::logic_error("emitted word never arrived");
    }
    const Arrival a = it->second.front();
    it->second.pop_front();
    m.max_displacement = std::max(m.max_displacement,
                                  pos > a.rank ? pos - a.rank : a.rank - pos);
    const std::uint64_t wait = emitted[pos].cycle - a.cycle;
    latency_sum += wait;
    if (w.source_id < m.per_channel_max_wait.size()) {
      auto& slot = m.per_channel_max_wait[w.source_id];
      slot = std::max(slot, wait);
    }
  }
  m.words = emitted.size();
  m.mean_latency_cycles =
      emitted.empty() ? 0.0 : static_cast<double>(latency_sum / emitted.size());
  return m;
}

bool conserves(const Trace& trace, const std::vector<OutputRecord>& records) {
  std::map<Key, std::int64_t> balance;
  for (const auto& cycle : trace) {
    for (const DataWord& w : cycle) {
      if (w.is_daq()) ++balance[{w.source_id, w.payload}];
    }
  }
  for (const auto& rec : records) {
    for (const auto& slot : rec.slots) {
      if (!slot) continue;
      if (!slot->is_daq()) return false;
      --balance[{slot->source_id, slot->payload}];
    }
  }
  return std::all_of(balance.begin(), balance.end(),
                     [](const auto& kv) { return kv.second == 0; });
}

BaselineResult polling_concentrate(const Trace& trace,
                                   std::uint32_t scan_factor) {
  if (scan_factor == 0) throw std::invalid_argument("scan_factor must be >= 1");
  const std::size_t width = trace_width(trace);
  RecordPacker packer(width);
  if (width == 0) return finish_result(trace, std::move(packer.output()));

  struct Queued {
    DataWord word;
    std::uint64_t arrival;
  };
  std::vector<std::deque<Queued>> queues(width);
  std::size_t queued = 0;
  std::size_t pointer = 0;
  std::uint64_t overruns = 0;

  std::uint64_t cycle = 0;
  for (; cycle < trace.size() || queued > 0; ++cycle) {
    if (queued == 0) pointer = 0;
    if (cycle < trace.size()) {
      for (std::size_t k = 0; k < width; ++k) {
        if (trace[cycle][k].is_daq()) {
          queues[k].push_back({trace[cycle][k], cycle});
          ++queued;
        }
      }
    }
    for (std::uint32_t slot = 0; slot < scan_factor && queued > 0; ++slot) {
      auto& q = queues[pointer];
      if (!q.empty()) {
        if (q.front().arrival < cycle) ++overruns;
        packer.push(q.front().word, cycle);
        q.pop_front();
        --queued;
      }
      pointer = (pointer + 1) % width;
    }
  }
  packer.finish(cycle);
  return finish_result(trace, std::move(packer.output()), overruns);
}

BaselineResult widthconv_concentrate(const Trace& trace) {
  const std::size_t width = trace_width(trace);
  RecordPacker packer(width);
  std::vector<OutputRecord> building(width, OutputRecord(width));
  std::vector<std::deque<OutputRecord>> completed(width);
  std::size_t waiting = 0;
  std::size_t rr = 0;

  std::uint64_t cycle = 0;
  for (; cycle < trace.size() || waiting > 0; ++cycle) {
    if (cycle < trace.size()) {
      for (std::size_t k = 0; k < width; ++k) {
        const DataWord& w = trace[cycle][k];
        if (!w.is_daq()) continue;
        OutputRecord& rec = building[k];
        rec.slots[rec.occupancy++] = w;
        if (rec.complete()) {
          completed[k].push_back(std::move(rec));
          rec = OutputRecord(width);
          ++waiting;
        }
      }
    }
    // Round-robin multiplexer: one complete record per cycle.
    for (std::size_t i = 0; i < width && waiting > 0; ++i) {
      const std::size_t ch = (rr + i) % width;
      if (completed[ch].empty()) continue;
      packer.emit_whole(std::move(completed[ch].front()), cycle);
      completed[ch].pop_front();
      --waiting;
      rr = (ch + 1) % width;
      break;
    }
  }
  for (auto& rec : building) {
    if (rec.occupancy > 0) packer.emit_whole(std::move(rec), cycle);
  }
  return finish_result(trace, std::move(packer.output()));
}

std::vector<std::uint32_t> encoder_tree_widths(std::uint32_t n_inputs,
                                               std::uint32_t word_bits) {
  if (n_inputs < 2 || !std::has_single_bit(n_inputs)) {
    throw std::invalid_argument("encoder tree needs a power-of-two input count >= 2");
  }
  std::vector<std::uint32_t> widths;
  for (std::uint32_t group = 1; group <= n_inputs; group *= 2) {
    widths.push_back(group * word_bits);
  }
  return widths;
}

namespace {

using Group = std::vector<DataWord>;

// R0, R1 and R3 of the 2-to-1 encoder: at most three groups buffered.
constexpr std::size_t kMergerCapacity = 3;

struct TreeNode {
  std::deque<Group> pending;    // internal nodes only
  std::deque<DataWord> fifo;    // leaves only: link-side buffer
  std::optional<Group> out_reg; // registered output seen by the parent
};

}  // namespace

BaselineResult encoder_tree_concentrate(const Trace& trace) {
  const std::size_t n = trace_width(trace);
  RecordPacker packer(n);
  if (n == 0) return finish_result(trace, std::move(packer.output()));
  encoder_tree_widths(static_cast<std::uint32_t>(n), 1);  // validates n

  // Heap layout: node 1 is the root, children of i are 2i and 2i+1, leaves
  // occupy n .. 2n-1.
  std::vector<TreeNode> nodes(2 * n);
  auto busy = [&] {
    for (std::size_t i = 1; i < 2 * n; ++i) {
      if (nodes[i].out_reg || !nodes[i].fifo.empty() ||
          nodes[i].pending.size() >= 2) {
        return true;
      }
    }
    return false;
  };

  std::uint64_t cycle = 0;
  for (; cycle < trace.size() || busy(); ++cycle) {
    // Parents before children so each reads last cycle's registered output.
    for (std::size_t i = 1; i < n; ++i) {
      TreeNode& node = nodes[i];
      for (std::size_t child : {2 * i, 2 * i + 1}) {
        auto& reg = nodes[child].out_reg;
        if (reg && node.pending.size() < kMergerCapacity) {
          node.pending.push_back(std::move(*reg));
          reg.reset();
        }  // otherwise the child holds
      }
      if (!node.out_reg && node.pending.size() >= 2) {
        Group merged = std::move(node.pending[0]);
        merged.insert(merged.end(), node.pending[1].begin(),
                      node.pending[1].end());
        node.pending.pop_front();
        node.pending.pop_front();
        node.out_reg = std::move(merged);
      }
      if (i == 1 && node.out_reg) {
        OutputRecord rec(n);
        for (const DataWord& w : *node.out_reg) rec.slots[rec.occupancy++] = w;
        packer.emit_whole(std::move(rec), cycle);
        node.out_reg.reset();
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      TreeNode& leaf = nodes[n + k];
      if (cycle < trace.size() && trace[cycle][k].is_daq()) {
        leaf.fifo.push_back(trace[cycle][k]);
      }
      if (!leaf.out_reg && !leaf.fifo.empty()) {
        leaf.out_reg = Group{leaf.fifo.front()};
        leaf.fifo.pop_front();
      }
    }
  }

  // Leftover single groups, nearest the root first.
  for (std::size_t i = 1; i < 2 * n; ++i) {
    for (const Group& g : nodes[i].pending) {
      for (const DataWord& w : g) packer.push(w, cycle);
    }
    if (nodes[i].out_reg) {
      for (const DataWord& w : *nodes[i].out_reg) packer.push(w, cycle);
    }
  }
  packer.finish(cycle);
  return finish_result(trace, std::move(packer.output()));
}

BaselineResult bnro_concentrate(const Trace& trace) {
  const std::size_t width = trace_width(trace);
  RecordPacker packer(width);
  if (width == 0) return finish_result(trace, std::move(packer.output()));
  if (!std::has_single_bit(width)) {
    throw std::invalid_argument("BNRO needs a power-of-two input count");
  }
  Concentrator conc(static_cast<unsigned>(std::countr_zero(width)));
  for (const auto& inputs : trace) {
    const std::uint64_t cycle = conc.cycle();
    if (auto rec = conc.step(inputs).emitted) {
      packer.emit_whole(std::move(*rec), cycle);
    }
  }
  if (auto partial = conc.flush()) {
    packer.emit_whole(std::move(*partial), trace.size());
  }
  return finish_result(trace, std::move(packer.output()));
}

void write_metrics_csv_header(std::ostream& os) {
  os << "method,inputs,words,records,max_displacement,mean_latency_cycles,"
        "max_channel_wait,overruns,conserved\n";
}

void write_metrics_csv_row(std::ostream& os, const std::string& method,
                           const Trace& trace, const BaselineResult& result) {
  const auto& m = result.metrics;
  const std::uint64_t max_wait =
      m.per_channel_max_wait.empty()
          ? 0
          : *std::max_element(m.per_channel_max_wait.begin(),
                              m.per_channel_max_wait.end());
  os << method << "," << trace_width(trace) << "," << m.words << ","
     << result.records.size() << "," << m.max_displacement << ","
     << m.mean_latency_cycles << "," << max_wait << "," << m.overruns << ","
     << (conserves(trace, result.records) ? 1 : 0) << "\n";
}

}  // namespace bnro
