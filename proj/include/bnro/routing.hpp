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

// Concentrator controller: ranks the active inputs, assigns wrap-around
// target outputs and self-routes every active input through the BNRO.
//
// Self-routing rule: the switch met at layer l is set to bar when bit l of
// the source input index equals bit l of the target output index, and to
// cross otherwise.

#ifndef BNRO_ROUTING_HPP_
#define BNRO_ROUTING_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bnro/daq_mask.hpp"
#include "bnro/topology.hpp"

namespace bnro {

enum class SwitchMode : std::uint8_t { kBar, kCross };

char mode_char(SwitchMode mode);  // '=' for bar, 'X' for cross

/// Switch output taken by data arriving on `in_port`.
inline unsigned switch_output(SwitchMode mode, unsigned in_port) {
  return mode == SwitchMode::kBar ? in_port : 1u - in_port;
}

/// Targets for one cycle: the j-th active input (ascending index) goes to
/// output (start + j) mod 2^N.
struct TargetAssignment {
  std::uint32_t start = 0;
  std::vector<std::optional<std::uint32_t>> target;  // per network input
  std::uint32_t active_count = 0;

  friend bool operator==(const TargetAssignment&,
                         const TargetAssignment&) = default;
};

/// Switch modes for one cycle. Switches are indexed layer-major:
/// layer * switches_per_layer + switch_index.
struct ConfigPlan {
  unsigned n_layers = 0;
  std::vector<SwitchMode> modes;
  std::vector<std::array<bool, 2>> used;  // live data on switch input 0 / 1
  TargetAssignment assignment;

  std::uint32_t switches_per_layer() const { return 1u << (n_layers - 1); }
  SwitchMode mode(unsigned layer, std::uint32_t switch_index) const {
    return modes.at(layer * switches_per_layer() + switch_index);
  }

  friend bool operator==(const ConfigPlan&, const ConfigPlan&) = default;
};

/// Two live words demanding the same output of one switch.
struct Collision {
  unsigned layer = 0;
  std::uint32_t switch_index = 0;
  std::uint32_t first_input = 0;   // network input routed first
  std::uint32_t second_input = 0;  // network input that conflicted

  std::string describe() const;
  friend bool operator==(const Collision&, const Collision&) = default;
};

class CollisionError : public std::runtime_error {
 public:
  explicit CollisionError(const Collision& c)
      : std::runtime_error(c.describe()), collision_(c) {}
  const Collision& collision() const { return collision_; }

 private:
  Collision collision_;
};

/// Either a collision-free plan or the first collision encountered.
class RouteResult {
 public:
  RouteResult(ConfigPlan plan) : value_(std::move(plan)) {}  // NOLINT
  RouteResult(Collision c) : value_(c) {}                    // NOLINT

  bool ok() const { return std::holds_alternative<ConfigPlan>(value_); }
  explicit operator bool() const { return ok(); }

  /// Throws CollisionError when the routing failed.
  const ConfigPlan& plan() const&;
  ConfigPlan plan() &&;
  const Collision& collision() const { return std::get<Collision>(value_); }

 private:
  std::variant<ConfigPlan, Collision> value_;
};

struct RouteHop {
  PortRef in;  // switch input the word arrives on
  SwitchMode mode;

  friend bool operator==(const RouteHop&, const RouteHop&) = default;
};

/// Rank of each active input among the active inputs; nullopt when inactive.
std::vector<std::optional<std::uint32_t>> rank_active(const DaqMask& mask);

/// Throws std::out_of_range when start >= mask.width().
TargetAssignment assign_targets(const DaqMask& mask, std::uint32_t start);

/// Path and switch modes taking network input `input` to output `output`.
std::vector<RouteHop> self_route(const Topology& t, std::uint32_t input,
                                 std::uint32_t output);

/// Superimposes the self-routed paths of every input that has a target.
/// Untouched switches stay in bar mode. Arbitrary assignments may collide.
RouteResult route_assignment(const Topology& t, const TargetAssignment& a);

/// route_assignment() of the concentration targets for (mask, start).
RouteResult compute_config(const Topology& t, const DaqMask& mask,
                           std::uint32_t start);

/// Moves data across one switch layer under `plan`. `lines` holds the values
/// at the layer's switch inputs (index switch * 2 + port); the result holds
/// the values at the next layer's inputs, or at the network outputs when
/// `layer` is the last one.
template <typename T>
std::vector<std::optional<T>> propagate_layer(
    const Topology& t, const ConfigPlan& plan, unsigned layer,
    const std::vector<std::optional<T>>& lines) {
  std::vector<std::optional<T>> next(lines.size());
  for (std::uint32_t s = 0; s < t.switches_per_layer(); ++s) {
    const SwitchMode mode = plan.mode(layer, s);
    for (unsigned p = 0; p < 2; ++p) {
      const auto& value = lines[s * 2 + p];
      if (!value) continue;
      const unsigned out = switch_output(mode, p);
      if (t.is_last_layer(layer)) {
        next[t.output_of(s, out)] = value;
      } else {
        const PortRef in = t.follow({layer, s, out});
        next[in.switch_index * 2 + in.port] = value;
      }
    }
  }
  return next;
}

/// Places network-input values on layer-0 switch input lines.
template <typename T>
std::vector<std::optional<T>> enter_network(
    const Topology& t, const std::vector<std::optional<T>>& inputs) {
  std::vector<std::optional<T>> lines(inputs.size());
  for (std::uint32_t k = 0; k < inputs.size(); ++k) {
    const PortRef in = t.entry(k);
    lines[in.switch_index * 2 + in.port] = inputs[k];
  }
  return lines;
}

/// Per-layer table of switch modes, one row per layer.
std::string render_plan(const ConfigPlan& plan);

}  // namespace bnro

#endif  // BNRO_ROUTING_HPP_
