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

// Cycle-accurate model of the concentrator datapath.
//
// Each cycle the controller drops non-DAQ words, gives the j-th DAQ word the
// target (p + j) mod 2^N where p is the fill pointer, and configures the
// network. Network outputs at or above p land in the output record; outputs
// below p (words that wrapped) land in the auxiliary record. When the output
// record fills it is emitted, and the auxiliary words are copied into slots
// [0, p) at the start of the next cycle.

#ifndef BNRO_ENGINE_HPP_
#define BNRO_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bnro/daq_mask.hpp"
#include "bnro/data_word.hpp"
#include "bnro/routing.hpp"
#include "bnro/topology.hpp"

namespace bnro {

struct ConcentratorState {
  std::uint32_t pointer = 0;
  OutputRecord output;
  // Auxiliary record. Holds words at positions [0, pointer) only right after
  // the output record was emitted.
  std::vector<std::optional<DataWord>> aux;

  static ConcentratorState fresh(std::uint32_t width);
  bool aux_empty() const;

  friend bool operator==(const ConcentratorState&,
                         const ConcentratorState&) = default;
};

struct CycleResult {
  std::optional<OutputRecord> emitted;
  TargetAssignment assignment;
};

struct StepOutput {
  ConcentratorState state;
  CycleResult result;
};

/// Per-cycle notification for tracing.
struct CycleTrace {
  std::uint64_t cycle = 0;
  DaqMask mask;
  std::uint32_t pointer_before = 0;
  std::uint32_t pointer_after = 0;
  bool emitted = false;
};
using TraceHook = std::function<void(const CycleTrace&)>;

/// One unpipelined cycle. Throws CollisionError if routing fails and
/// std::invalid_argument when the input vector has the wrong width.
StepOutput step(const Topology& t, ConcentratorState state,
                const InputVector& inputs);

/// End-of-stream drain: the in-progress record (auxiliary words included) or
/// nullopt when nothing is buffered. Resets `state`.
std::optional<OutputRecord> flush(ConcentratorState& state);

/// Stateful wrapper around step(); not thread-safe.
class Concentrator {
 public:
  explicit Concentrator(unsigned n_layers);
  explicit Concentrator(Topology topology);

  CycleResult step(const InputVector& inputs);
  std::optional<OutputRecord> flush();

  const Topology& topology() const { return topology_; }
  const ConcentratorState& state() const { return state_; }
  void restore(ConcentratorState state) { state_ = std::move(state); }
  std::uint64_t cycle() const { return cycle_; }
  void set_trace_hook(TraceHook hook) { hook_ = std::move(hook); }

 private:
  Topology topology_;
  ConcentratorState state_;
  std::uint64_t cycle_ = 0;
  TraceHook hook_;
};

/// Concentrator with optional pipeline registers at the output of selected
/// network layers. The controller runs ahead; routed data and the plan move
/// one register per cycle, so records are emitted exactly L cycles later than
/// in the unpipelined model, L being the number of registered layers.
class PipelinedConcentrator {
 public:
  /// `registered` must have one flag per layer.
  PipelinedConcentrator(unsigned n_layers, std::vector<bool> registered);
  /// Bit l of `layer_mask` registers layer l.
  static PipelinedConcentrator from_mask(unsigned n_layers,
                                         std::uint32_t layer_mask);

  CycleResult step(const InputVector& inputs);
  /// Steps with idle inputs until the pipeline is empty, then flushes.
  /// Returns every record produced, the partial one last.
  std::vector<OutputRecord> drain();

  unsigned latency() const { return latency_; }
  const Topology& topology() const { return topology_; }
  std::uint64_t cycle() const { return cycle_; }
  void set_trace_hook(TraceHook hook) { hook_ = std::move(hook); }

 private:
  struct Bundle {
    std::vector<std::optional<DataWord>> lines;
    ConfigPlan plan;
    unsigned next_layer = 0;
  };

  // Propagates until a registered layer or the output stage is reached.
  std::optional<OutputRecord> advance(Bundle bundle);

  Topology topology_;
  std::vector<bool> registered_;
  unsigned latency_ = 0;
  std::uint32_t controller_pointer_ = 0;
  ConcentratorState latch_;
  std::vector<std::optional<Bundle>> registers_;  // indexed by layer
  std::uint64_t cycle_ = 0;
  TraceHook hook_;
};

}  // namespace bnro

#endif  // BNRO_ENGINE_HPP_
