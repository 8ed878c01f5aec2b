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

// Brute-force oracles and sweeps over concentration tasks.
//
// A concentration task is a pair (DAQ mask, start pointer). Exhaustive sweeps
// enumerate task index i as mask = i >> N, start = i & (2^N - 1).

#ifndef BNRO_VERIFY_HPP_
#define BNRO_VERIFY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnro/daq_mask.hpp"
#include "bnro/routing.hpp"
#include "bnro/topology.hpp"

namespace bnro {

/// Follows every network input through the wiring under `modes` (layer-major
/// switch order). The result maps input -> output.
std::vector<std::uint32_t> oracle_route(const Topology& t,
                                        const std::vector<SwitchMode>& modes);

/// True when every active input of `mask` reaches output
/// (start + rank) mod 2^N under `permutation`. Computes ranks itself.
bool solves_task(const std::vector<std::uint32_t>& permutation,
                 const DaqMask& mask, std::uint32_t start);

struct Sampling {
  enum class Kind { kExhaustive, kRandom };
  Kind kind = Kind::kExhaustive;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;

  static Sampling exhaustive() { return {}; }
  static Sampling random(std::uint64_t count, std::uint64_t seed) {
    return {Kind::kRandom, count, seed};
  }
};

struct Counterexample {
  std::uint64_t case_index = 0;
  std::string mask;  // character i is input i
  std::uint32_t start = 0;
  bool collision = false;  // false: collision-free plan that misroutes
  unsigned layer = 0;
  std::uint32_t switch_index = 0;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct SweepReport {
  unsigned n_layers = 0;
  std::uint64_t cases_total = 0;
  std::uint64_t cases_passed = 0;
  std::uint64_t collisions = 0;
  std::uint64_t misroutes = 0;
  std::vector<Counterexample> failures;  // lowest case indices first

  static constexpr std::size_t kMaxFailures = 16;

  bool clean() const { return cases_passed == cases_total; }
  /// Appends a report covering later case indices.
  void merge(const SweepReport& later);

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Task for case `index` under the given sampling.
std::pair<DaqMask, std::uint32_t> sweep_case(unsigned n_layers,
                                             const Sampling& sampling,
                                             std::uint64_t index);

/// Runs compute_config on every sampled task and checks arrivals with
/// oracle_route. Exhaustive sampling is limited to N <= 4. The report does
/// not depend on `workers`.
SweepReport sweep_collision_freedom(unsigned n_layers, const Sampling& sampling,
                                    unsigned workers = 1);

struct CoverageReport {
  unsigned n_layers = 0;
  std::uint64_t configurations = 0;
  // solutions[mask * 2^N + start]: switch configurations solving the task.
  std::vector<std::uint32_t> solutions;
  std::uint64_t uncovered = 0;
};

/// Enumerates every switch configuration (N <= 3) and counts, per task, how
/// many of them concentrate it. Does not use the routing algorithm.
CoverageReport exhaustive_config_search(unsigned n_layers);

/// Switch modes for every task, bit l * 2^(N-1) + s set when switch s of
/// layer l is in cross mode.
struct ConfigTable {
  unsigned n_layers = 0;
  unsigned entry_bits = 0;
  std::vector<std::uint32_t> entries;  // indexed by mask * 2^N + start

  std::uint32_t entry(std::uint64_t mask, std::uint32_t start) const {
    return entries.at((mask << n_layers) | start);
  }

  friend bool operator==(const ConfigTable&, const ConfigTable&) = default;
};

std::uint32_t pack_modes(const std::vector<SwitchMode>& modes);
std::vector<SwitchMode> unpack_modes(std::uint32_t word, unsigned n_layers);

/// N <= 4. Throws CollisionError if any task fails to route.
ConfigTable generate_table(unsigned n_layers);

/// Re-checks every entry with oracle_route; cases_total = entry count.
SweepReport revalidate_table(const ConfigTable& table);

// Binary table format, all fields little-endian:
//   bytes 0-3   magic "BNRT"
//   bytes 4-5   format version (1)
//   byte  6     N
//   byte  7     entry bit width (N * 2^(N-1))
//   bytes 8-11  entry count (2^(2^N + N))
//   bytes 12-15 bytes per entry (entry bit width rounded up to bytes)
// followed by the entries in task order.
inline constexpr std::size_t kTableHeaderBytes = 16;
void write_table(std::ostream& os, const ConfigTable& table);
/// Throws std::runtime_error on a bad header or truncated data.
ConfigTable read_table(std::istream& is);

std::string sweep_report_json(const SweepReport& report);
std::string coverage_report_json(const CoverageReport& report);

}  // namespace bnro

#endif  // BNRO_VERIFY_HPP_
