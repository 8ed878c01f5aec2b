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

#include "bnro/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bnro {

ConcentratorState ConcentratorState::fresh(std::uint32_t width) {
  ConcentratorState s;
  s.output = OutputRecord(width);
  s.aux.resize(width - 1);
  return s;
}

bool ConcentratorState::aux_empty() const {
  return std::none_of(aux.begin(), aux.end(),
                      [](const auto& w) { return w.has_value(); });
}

namespace {

void check_inputs(const Topology& t, const InputVector& inputs) {
  if (inputs.size() != t.ports()) {
    throw std::invalid_argument("expected " + std::to_string(t.ports()) +
                                " input words, got " +
                                std::to_string(inputs.size()));
  }
}

// DAQ words only; non-DAQ words never enter the datapath.
std::vector<std::optional<DataWord>> daq_words(const InputVector& inputs) {
  std::vector<std::optional<DataWord>> words(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].is_daq()) words[k] = inputs[k];
  }
  return words;
}

// Output and auxiliary register update for one set of network outputs.
std::optional<OutputRecord> latch(ConcentratorState& s,
                                  const std::vector<std::optional<DataWord>>& outputs,
                                  const TargetAssignment& a) {
  const auto width = static_cast<std::uint32_t>(outputs.size());
  if (a.start != s.pointer) {
    throw std::logic_error("output stage pointer out of step with controller");
  }
  for (std::uint32_t i = 0; i < s.aux.size(); ++i) {
    if (!s.aux[i]) continue;
    s.output.slots[i] = std::move(s.aux[i]);
    s.aux[i].reset();
    ++s.output.occupancy;
  }

  const std::uint32_t start = s.pointer;
  for (std::uint32_t o = 0; o < width; ++o) {
    if (!outputs[o]) continue;
    if (o >= start) {
      s.output.slots[o] = outputs[o];
      ++s.output.occupancy;
    } else {
      s.aux[o] = outputs[o];
    }
  }

  const std::uint32_t m = a.active_count;
  s.pointer = (start + m) % width;
  if (m == 0 || start + m < width) return std::nullopt;
  OutputRecord done = std::move(s.output);
  s.output = OutputRecord(width);
  return done;
}

std::vector<std::optional<DataWord>> traverse(const Topology& t,
                                              const ConfigPlan& plan,
                                              std::vector<std::optional<DataWord>> lines,
                                              unsigned from, unsigned to) {
  for (unsigned l = from; l < to; ++l) {
    lines = propagate_layer(t, plan, l, lines);
  }
  return lines;
}

}  // namespace

StepOutput step(const Topology& t, ConcentratorState state,
                const InputVector& inputs) {
  check_inputs(t, inputs);
  const DaqMask mask = DaqMask::from_inputs(inputs);
  ConfigPlan plan = compute_config(t, mask, state.pointer).plan();
  const auto outputs = traverse(t, plan, enter_network(t, daq_words(inputs)),
                                0, t.n_layers());
  StepOutput out;
  out.result.emitted = latch(state, outputs, plan.assignment);
  out.result.assignment = std::move(plan.assignment);
  out.state = std::move(state);
  return out;
}

std::optional<OutputRecord> flush(ConcentratorState& state) {
  const auto width = static_cast<std::uint32_t>(state.output.width());
  std::optional<OutputRecord> partial;
  if (state.pointer != 0 || !state.aux_empty()) {
    OutputRecord rec = std::move(state.output);
    for (std::uint32_t i = 0; i < state.aux.size(); ++i) {
      if (state.aux[i]) {
        rec.slots[i] = state.aux[i];
        ++rec.occupancy;
      }
    }
    partial = std::move(rec);
  }
  state = ConcentratorState::fresh(width);
  return partial;
}

Concentrator::Concentrator(unsigned n_layers)
    : Concentrator(build_topology(n_layers)) {}

Concentrator::Concentrator(Topology topology)
    : topology_(std::move(topology)),
      state_(ConcentratorState::fresh(topology_.ports())) {}

CycleResult Concentrator::step(const InputVector& inputs) {
  const std::uint32_t before = state_.pointer;
  StepOutput out = bnro::step(topology_, std::move(state_), inputs);
  state_ = std::move(out.state);
  if (hook_) {
    hook_({cycle_, DaqMask::from_inputs(inputs), before, state_.pointer,
           out.result.emitted.has_value()});
  }
  ++cycle_;
  return std::move(out.result);
}

std::optional<OutputRecord> Concentrator::flush() {
  return bnro::flush(state_);
}

PipelinedConcentrator::PipelinedConcentrator(unsigned n_layers,
                                             std::vector<bool> registered)
    : topology_(build_topology(n_layers)),
      registered_(std::move(registered)),
      latch_(ConcentratorState::fresh(topology_.ports())),
      registers_(n_layers) {
  if (registered_.size() != n_layers) {
    throw std::invalid_argument("need one pipeline flag per layer");
  }
  latency_ = static_cast<unsigned>(
      std::count(registered_.begin(), registered_.end(), true));
}

PipelinedConcentrator PipelinedConcentrator::from_mask(unsigned n_layers,
                                                       std::uint32_t layer_mask) {
  if (n_layers < kMinLayers || n_layers > kMaxLayers) {
    // Let build_topology produce the bounds message.
    build_topology(n_layers);
  }
  if ((layer_mask >> n_layers) != 0) {
    throw std::invalid_argument("pipeline mask has bits beyond layer " +
                                std::to_string(n_layers - 1));
  }
  std::vector<bool> flags(n_layers);
  for (unsigned l = 0; l < n_layers; ++l) flags[l] = (layer_mask >> l) & 1u;
  return PipelinedConcentrator(n_layers, std::move(flags));
}

std::optional<OutputRecord> PipelinedConcentrator::advance(Bundle bundle) {
  for (unsigned l = bundle.next_layer; l < topology_.n_layers(); ++l) {
    bundle.lines = propagate_layer(topology_, bundle.plan, l, bundle.lines);
    if (registered_[l]) {
      bundle.next_layer = l + 1;
      registers_[l] = std::move(bundle);
      return std::nullopt;
    }
  }
  return latch(latch_, bundle.lines, bundle.plan.assignment);
}

CycleResult PipelinedConcentrator::step(const InputVector& inputs) {
  check_inputs(topology_, inputs);
  const DaqMask mask = DaqMask::from_inputs(inputs);
  const std::uint32_t before = controller_pointer_;
  ConfigPlan plan = compute_config(topology_, mask, controller_pointer_).plan();
  controller_pointer_ =
      (controller_pointer_ + plan.assignment.active_count) % topology_.ports();

  CycleResult result;
  result.assignment = plan.assignment;

  // Deepest register first so every bundle finds its next register vacated.
  for (unsigned l = topology_.n_layers(); l-- > 0;) {
    if (!registers_[l]) continue;
    Bundle moving = std::move(*registers_[l]);
    registers_[l].reset();
    if (auto rec = advance(std::move(moving))) result.emitted = std::move(rec);
  }
  Bundle fresh{enter_network(topology_, daq_words(inputs)), std::move(plan), 0};
  if (auto rec = advance(std::move(fresh))) result.emitted = std::move(rec);

  if (hook_) {
    hook_({cycle_, mask, before, controller_pointer_,
           result.emitted.has_value()});
  }
  ++cycle_;
  return result;
}

std::vector<OutputRecord> PipelinedConcentrator::drain() {
  std::vector<OutputRecord> out;
  InputVector idle(topology_.ports());
  for (std::uint32_t k = 0; k < idle.size(); ++k) idle[k] = DataWord::non_daq(k);
  for (unsigned i = 0; i < latency_; ++i) {
    if (auto rec = step(idle).emitted) out.push_back(std::move(*rec));
  }
  if (auto partial = bnro::flush(latch_)) out.push_back(std::move(*partial));
  controller_pointer_ = 0;
  return out;
}

}  // namespace bnro
