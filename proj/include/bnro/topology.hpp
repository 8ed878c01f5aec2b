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

// Wiring of the N-layer baseline network with reversed outputs (BNRO).
//
// Conventions: inputs, outputs, switches and layers are numbered from 0.
// Layer 0 is adjacent to the network inputs. A switch port is addressed by
// (layer, switch index, port) where port is 0 (upper) or 1 (lower). The
// network is built recursively: an N-layer network is one switch layer whose
// output 0 feeds an upper (N-1)-layer network and whose output 1 feeds a
// lower one. The last-layer outputs are exposed in bit-reversed order, so the
// port chosen at layer l becomes bit l of the network output index.

#ifndef BNRO_TOPOLOGY_HPP_
#define BNRO_TOPOLOGY_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace bnro {

inline constexpr unsigned kMinLayers = 1;
inline constexpr unsigned kMaxLayers = 8;

struct PortRef {
  unsigned layer = 0;
  std::uint32_t switch_index = 0;
  unsigned port = 0;

  friend bool operator==(const PortRef&, const PortRef&) = default;
  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

/// Mirrors the low `width` bits of `index`.
std::uint32_t bit_reverse(std::uint32_t index, unsigned width);

/// Immutable wired network. All queries are const and thread-safe.
class Topology {
 public:
  unsigned n_layers() const { return n_layers_; }
  std::uint32_t ports() const { return 1u << n_layers_; }
  std::uint32_t switches_per_layer() const { return 1u << (n_layers_ - 1); }
  std::uint32_t switch_count() const { return n_layers_ * switches_per_layer(); }

  /// Switch input fed by network input `input`.
  PortRef entry(std::uint32_t input) const;
  /// Network input feeding a layer-0 switch input.
  std::uint32_t source_of(const PortRef& layer0_input) const;

  /// Next-layer switch input driven by switch output `out`; requires
  /// out.layer < n_layers() - 1.
  PortRef follow(const PortRef& out) const;
  /// Previous-layer switch output driving switch input `in`; requires
  /// in.layer > 0.
  PortRef driver(const PortRef& in) const;

  /// Network output driven by a last-layer switch output.
  std::uint32_t output_of(std::uint32_t switch_index, unsigned port) const;

  bool is_last_layer(unsigned layer) const { return layer + 1 == n_layers_; }

  /// Throws std::out_of_range when the coordinates do not name a switch port.
  void check(const PortRef& ref) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  friend Topology build_topology(unsigned n_layers);

  static std::uint32_t line(const PortRef& ref) {
    return ref.switch_index * 2 + ref.port;
  }
  PortRef unline(unsigned layer, std::uint32_t line) const {
    return {layer, line / 2, line % 2};
  }

  unsigned n_layers_ = 0;
  // forward_[l][line] for l < N-1: next-layer input line; for l = N-1: the
  // network output index. A line is switch_index * 2 + port.
  std::vector<std::vector<std::uint32_t>> forward_;
  // backward_[l][line] for l > 0: previous-layer output line; for l = 0: the
  // network input index.
  std::vector<std::vector<std::uint32_t>> backward_;
  std::vector<std::uint32_t> entry_;
};

/// Builds the N-layer BNRO for 1 <= n_layers <= 8; throws
/// std::invalid_argument otherwise.
Topology build_topology(unsigned n_layers);

/// Network inputs that can reach any input of the given switch.
std::set<std::uint32_t> reachable_inputs(const Topology& t, unsigned layer,
                                         std::uint32_t switch_index);
/// Network inputs that can reach one specific input port of the switch.
std::set<std::uint32_t> reachable_inputs(const Topology& t, const PortRef& in);

/// Network outputs reachable from one output port of the switch.
std::set<std::uint32_t> reachable_outputs(const Topology& t, unsigned layer,
                                          std::uint32_t switch_index,
                                          unsigned port);

/// One line per link, e.g. "L0 S3 P1 -> L1 S5 P1" or "L2 S0 P1 -> OUT 4",
/// preceded by a "# bnro-wiring v1 layers=N" header.
std::string dump_wiring(const Topology& t);

}  // namespace bnro

#endif  // BNRO_TOPOLOGY_HPP_
