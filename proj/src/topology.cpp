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

#include "bnro/topology.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace bnro {
namespace {

// Plain baseline network with outputs in natural (not reversed) order.
struct NaturalBaseline {
  std::vector<std::vector<std::uint32_t>> forward;
  std::vector<std::uint32_t> entry;
};

NaturalBaseline build_natural(unsigned n_layers) {
  NaturalBaseline net;
  const std::uint32_t lines = 1u << n_layers;
  net.entry.resize(lines);
  for (std::uint32_t k = 0; k < lines; ++k) net.entry[k] = k;

  if (n_layers == 1) {
    net.forward.push_back({0, 1});
    return net;
  }

  const NaturalBaseline sub = build_natural(n_layers - 1);
  const std::uint32_t half = lines / 2;

  // Output j of switch r feeds input r of subnetwork j.
  std::vector<std::uint32_t> first(lines);
  for (std::uint32_t r = 0; r < half; ++r) {
    for (std::uint32_t j = 0; j < 2; ++j) {
      first[2 * r + j] = j * half + sub.entry[r];
    }
  }
  net.forward.push_back(std::move(first));

  for (const auto& sub_layer : sub.forward) {
    std::vector<std::uint32_t> layer(lines);
    for (std::uint32_t copy = 0; copy < 2; ++copy) {
      for (std::uint32_t x = 0; x < half; ++x) {
        layer[copy * half + x] = copy * half + sub_layer[x];
      }
    }
    net.forward.push_back(std::move(layer));
  }
  return net;
}

}  // namespace

std::uint32_t bit_reverse(std::uint32_t index, unsigned width) {
  std::uint32_t out = 0;
  for (unsigned b = 0; b < width; ++b) {
    out |= ((index >> b) & 1u) << (width - 1 - b);
  }
  return out;
}

Topology build_topology(unsigned n_layers) {
  if (n_layers < kMinLayers || n_layers > kMaxLayers) {
    throw std::invalid_argument("n_layers must be in [" +
                                std::to_string(kMinLayers) + ", " +
                                std::to_string(kMaxLayers) + "], got " +
                                std::to_string(n_layers));
  }
  NaturalBaseline natural = build_natural(n_layers);

  Topology t;
  t.n_layers_ = n_layers;
  t.entry_ = std::move(natural.entry);
  t.forward_ = std::move(natural.forward);
  for (auto& out : t.forward_.back()) out = bit_reverse(out, n_layers);

  const std::uint32_t lines = t.ports();
  t.backward_.assign(n_layers, std::vector<std::uint32_t>(lines));
  for (std::uint32_t k = 0; k < lines; ++k) t.backward_[0][t.entry_[k]] = k;
  for (unsigned l = 0; l + 1 < n_layers; ++l) {
    for (std::uint32_t x = 0; x < lines; ++x) {
      t.backward_[l + 1][t.forward_[l][x]] = x;
    }
  }
  return t;
}

void Topology::check(const PortRef& ref) const {
  if (ref.layer >= n_layers_ || ref.switch_index >= switches_per_layer() ||
      ref.port > 1) {
    throw std::out_of_range("switch port (layer " + std::to_string(ref.layer) +
                            ", switch " + std::to_string(ref.switch_index) +
                            ", port " + std::to_string(ref.port) +
                            ") outside a " + std::to_string(n_layers_) +
                            "-layer network");
  }
}

PortRef Topology::entry(std::uint32_t input) const {
  if (input >= ports()) {
    throw std::out_of_range("network input " + std::to_string(input) +
                            " out of range");
  }
  return unline(0, entry_[input]);
}

std::uint32_t Topology::source_of(const PortRef& layer0_input) const {
  check(layer0_input);
  if (layer0_input.layer != 0) {
    throw std::out_of_range("source_of expects a layer-0 switch input");
  }
  return backward_[0][line(layer0_input)];
}

PortRef Topology::follow(const PortRef& out) const {
  check(out);
  if (is_last_layer(out.layer)) {
    throw std::out_of_range("last-layer outputs drive network outputs");
  }
  return unline(out.layer + 1, forward_[out.layer][line(out)]);
}

PortRef Topology::driver(const PortRef& in) const {
  check(in);
  if (in.layer == 0) {
    throw std::out_of_range("layer-0 inputs are driven by network inputs");
  }
  return unline(in.layer - 1, backward_[in.layer][line(in)]);
}

std::uint32_t Topology::output_of(std::uint32_t switch_index,
                                  unsigned port) const {
  const PortRef ref{n_layers_ - 1, switch_index, port};
  check(ref);
  return forward_.back()[line(ref)];
}

namespace {

void collect_inputs(const Topology& t, const PortRef& in,
                    std::set<std::uint32_t>& acc) {
  if (in.layer == 0) {
    acc.insert(t.source_of(in));
    return;
  }
  const PortRef prev = t.driver(in);
  // Either input of the driving switch can be steered to `prev`.
  collect_inputs(t, {prev.layer, prev.switch_index, 0}, acc);
  collect_inputs(t, {prev.layer, prev.switch_index, 1}, acc);
}

void collect_outputs(const Topology& t, const PortRef& out,
                     std::set<std::uint32_t>& acc) {
  if (t.is_last_layer(out.layer)) {
    acc.insert(t.output_of(out.switch_index, out.port));
    return;
  }
  const PortRef next = t.follow(out);
  collect_outputs(t, {next.layer, next.switch_index, 0}, acc);
  collect_outputs(t, {next.layer, next.switch_index, 1}, acc);
}

}  // namespace

std::set<std::uint32_t> reachable_inputs(const Topology& t, const PortRef& in) {
  t.check(in);
  std::set<std::uint32_t> acc;
  collect_inputs(t, in, acc);
  return acc;
}

std::set<std::uint32_t> reachable_inputs(const Topology& t, unsigned layer,
                                         std::uint32_t switch_index) {
  auto acc = reachable_inputs(t, PortRef{layer, switch_index, 0});
  acc.merge(reachable_inputs(t, PortRef{layer, switch_index, 1}));
  return acc;
}

std::set<std::uint32_t> reachable_outputs(const Topology& t, unsigned layer,
                                          std::uint32_t switch_index,
                                          unsigned port) {
  const PortRef out{layer, switch_index, port};
  t.check(out);
  std::set<std::uint32_t> acc;
  collect_outputs(t, out, acc);
  return acc;
}

std::string dump_wiring(const Topology& t) {
  std::ostringstream os;
  os << "# bnro-wiring v1 layers=" << t.n_layers() << "\n";
  for (unsigned l = 0; l < t.n_layers(); ++l) {
    for (std::uint32_t s = 0; s < t.switches_per_layer(); ++s) {
      for (unsigned p = 0; p < 2; ++p) {
        os << "L" << l << " S" << s << " P" << p << " -> ";
        if (t.is_last_layer(l)) {
          os << "OUT " << t.output_of(s, p);
        } else {
          const PortRef n = t.follow({l, s, p});
          os << "L" << n.layer << " S" << n.switch_index << " P" << n.port;
        }
        os << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace bnro
