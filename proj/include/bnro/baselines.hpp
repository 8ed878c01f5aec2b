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

// Behavioral models of alternative concentration methods, used to compare
// ordering and latency against the BNRO concentrator on the same trace.

#ifndef BNRO_BASELINES_HPP_
#define BNRO_BASELINES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnro/data_word.hpp"
#include "bnro/streams.hpp"

namespace bnro {

/// Ordering disturbance of a concentrated stream. Displacement compares a
/// word's position in the output stream with its position in the arrival
/// order (cycle-major, input-minor); wait is emission cycle minus arrival
/// cycle, where a word is emitted with the record that carries it.
struct OrderingMetrics {
  std::uint64_t words = 0;
  std::uint64_t max_displacement = 0;
  double mean_latency_cycles = 0.0;
  std::vector<std::uint64_t> per_channel_max_wait;
  std::uint64_t overruns = 0;  // polling only: words collected after their cycle
};

struct BaselineResult {
  std::vector<OutputRecord> records;
  OrderingMetrics metrics;
};

/// One concentrated word with the cycle its record left the concentrator.
struct Emission {
  DataWord word;
  std::uint64_t cycle = 0;
};

OrderingMetrics measure_ordering(const Trace& trace,
                                 const std::vector<Emission>& emitted);

/// True when the records hold exactly the trace's DAQ words (as a multiset of
/// (source, payload)) and nothing else.
bool conserves(const Trace& trace, const std::vector<OutputRecord>& records);

/// Scanner visiting inputs round-robin, scan_factor inputs per data cycle.
/// Words wait in unbounded per-input queues. When every queue is empty at a
/// data-cycle boundary the scanner restarts at input 0.
BaselineResult polling_concentrate(const Trace& trace, std::uint32_t scan_factor);

/// Each channel packs its DAQ words into a private record; completed records
/// leave through a round-robin multiplexer, one record per cycle. Leftover
/// partial records are flushed in channel order at the end.
BaselineResult widthconv_concentrate(const Trace& trace);

/// Binary tree of 2-to-1 mergers. A level-k merger combines two streams of
/// 2^(k-1)-word groups into 2^k-word groups, holding its inputs while its
/// internal registers are full. One cycle per level.
BaselineResult encoder_tree_concentrate(const Trace& trace);

/// Datapath width at each tree level, leaves first: 8 inputs of 32 bits
/// give {32, 64, 128, 256}.
std::vector<std::uint32_t> encoder_tree_widths(std::uint32_t n_inputs,
                                               std::uint32_t word_bits);

/// The BNRO engine on the same trace (trace width must be a power of two).
BaselineResult bnro_concentrate(const Trace& trace);

/// "method,inputs,words,records,max_displacement,mean_latency_cycles,
/// max_channel_wait,overruns,conserved"
void write_metrics_csv_header(std::ostream& os);
void write_metrics_csv_row(std::ostream& os, const std::string& method,
                           const Trace& trace, const BaselineResult& result);

}  // namespace bnro

#endif  // BNRO_BASELINES_HPP_
