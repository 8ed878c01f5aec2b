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

#include "bnro/routing.hpp"

#include <sstream>

namespace bnro {

char mode_char(SwitchMode mode) { return mode == SwitchMode::kBar ? '=' : 'X'; }

std::string Collision::describe() const {
  std::ostringstream os;
  os << "collision at layer " << layer << " switch " << switch_index
     << " between inputs " << first_input << " and " << second_input;
  return os.str();
}

const ConfigPlan& RouteResult::plan() const& {
  if (!ok()) throw CollisionError(collision());
  return std::get<ConfigPlan>(value_);
}

ConfigPlan RouteResult::plan() && {
  if (!ok()) throw CollisionError(collision());
  return std::get<ConfigPlan>(std::move(value_));
}

std::vector<std::optional<std::uint32_t>> rank_active(const DaqMask& mask) {
  std::vector<std::optional<std::uint32_t>> ranks(mask.width());
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < mask.width(); ++i) {
    if (mask.test(i)) ranks[i] = next++;
  }
  return ranks;
}

TargetAssignment assign_targets(const DaqMask& mask, std::uint32_t start) {
  const auto width = static_cast<std::uint32_t>(mask.width());
  if (start >= width) {
    throw std::out_of_range("start " + std::to_string(start) +
                            " must be below " + std::to_string(width));
  }
  TargetAssignment a;
  a.start = start;
  a.target.resize(width);
  const auto ranks = rank_active(mask);
  for (std::uint32_t k = 0; k < width; ++k) {
    if (!ranks[k]) continue;
    a.target[k] = (start + *ranks[k]) % width;
    ++a.active_count;
  }
  return a;
}

namespace {

void check_index(const Topology& t, std::uint32_t index, const char* what) {
  if (index >= t.ports()) {
    throw std::out_of_range(std::string(what) + " " + std::to_string(index) +
                            " out of range for " + std::to_string(t.ports()) +
                            " ports");
  }
}

SwitchMode mode_for(std::uint32_t input, std::uint32_t output, unsigned layer) {
  return ((input >> layer) & 1u) == ((output >> layer) & 1u)
             ? SwitchMode::kBar
             : SwitchMode::kCross;
}

}  // namespace

std::vector<RouteHop> self_route(const Topology& t, std::uint32_t input,
                                 std::uint32_t output) {
  check_index(t, input, "input");
  check_index(t, output, "output");
  std::vector<RouteHop> path;
  path.reserve(t.n_layers());
  PortRef at = t.entry(input);
  for (unsigned l = 0; l < t.n_layers(); ++l) {
    const SwitchMode mode = mode_for(input, output, l);
    path.push_back({at, mode});
    if (!t.is_last_layer(l)) {
      at = t.follow({l, at.switch_index, switch_output(mode, at.port)});
    }
  }
  return path;
}

RouteResult compute_config(const Topology& t, const DaqMask& mask,
                           std::uint32_t start) {
  if (mask.width() != t.ports()) {
    throw std::invalid_argument("mask width does not match the network");
  }
  return route_assignment(t, assign_targets(mask, start));
}

RouteResult route_assignment(const Topology& t, const TargetAssignment& a) {
  if (a.target.size() != t.ports()) {
    throw std::invalid_argument("assignment width does not match the network");
  }
  ConfigPlan plan;
  plan.n_layers = t.n_layers();
  plan.modes.assign(t.switch_count(), SwitchMode::kBar);
  plan.used.assign(t.switch_count(), {false, false});
  plan.assignment = a;

  // Input occupying each switch, to name both parties of a collision.
  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> owner(t.switch_count(), kNone);
  const std::uint32_t per_layer = t.switches_per_layer();

  for (std::uint32_t k = 0; k < t.ports(); ++k) {
    const auto& target = plan.assignment.target[k];
    if (!target) continue;
    check_index(t, *target, "target");
    PortRef at = t.entry(k);
    for (unsigned l = 0; l < t.n_layers(); ++l) {
      const std::uint32_t idx = l * per_layer + at.switch_index;
      const SwitchMode mode = mode_for(k, *target, l);
      if (owner[idx] != kNone &&
          (plan.used[idx][at.port] || plan.modes[idx] != mode)) {
        return Collision{l, at.switch_index, owner[idx], k};
      }
      plan.modes[idx] = mode;
      plan.used[idx][at.port] = true;
      owner[idx] = k;
      if (!t.is_last_layer(l)) {
        at = t.follow({l, at.switch_index, switch_output(mode, at.port)});
      }
    }
  }
  return plan;
}

std::string render_plan(const ConfigPlan& plan) {
  std::ostringstream os;
  for (unsigned l = 0; l < plan.n_layers; ++l) {
    os << "L" << l << " ";
    for (std::uint32_t s = 0; s < plan.switches_per_layer(); ++s) {
      const std::size_t idx = l * plan.switches_per_layer() + s;
      const bool live = plan.used[idx][0] || plan.used[idx][1];
      os << (live ? mode_char(plan.modes[idx]) : '.');
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace bnro
