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

#include "bnro/verify.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bnro {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t exhaustive_case_count(unsigned n_layers) {
  return std::uint64_t{1} << ((1u << n_layers) + n_layers);
}

}  // namespace

std::vector<std::uint32_t> oracle_route(const Topology& t,
                                        const std::vector<SwitchMode>& modes) {
  if (modes.size() != t.switch_count()) {
    throw std::invalid_argument("mode vector does not cover every switch");
  }
  std::vector<std::uint32_t> perm(t.ports());
  for (std::uint32_t k = 0; k < t.ports(); ++k) {
    PortRef at = t.entry(k);
    for (;;) {
      const SwitchMode mode =
          modes[at.layer * t.switches_per_layer() + at.switch_index];
      const unsigned out = mode == SwitchMode::kBar ? at.port : 1u - at.port;
      if (t.is_last_layer(at.layer)) {
        perm[k] = t.output_of(at.switch_index, out);
        break;
      }
      at = t.follow({at.layer, at.switch_index, out});
    }
  }
  return perm;
}

bool solves_task(const std::vector<std::uint32_t>& permutation,
                 const DaqMask& mask, std::uint32_t start) {
  const auto width = static_cast<std::uint32_t>(permutation.size());
  std::uint32_t seen = 0;
  for (std::uint32_t k = 0; k < width; ++k) {
    if (!mask.test(k)) continue;
    if (permutation[k] != (start + seen) % width) return false;
    ++seen;
  }
  return true;
}

void SweepReport::merge(const SweepReport& later) {
  cases_total += later.cases_total;
  cases_passed += later.cases_passed;
  collisions += later.collisions;
  misroutes += later.misroutes;
  for (const auto& f : later.failures) {
    if (failures.size() >= kMaxFailures) break;
    failures.push_back(f);
  }
}

std::pair<DaqMask, std::uint32_t> sweep_case(unsigned n_layers,
                                             const Sampling& sampling,
                                             std::uint64_t index) {
  const std::uint32_t width = 1u << n_layers;
  if (sampling.kind == Sampling::Kind::kExhaustive) {
    return {DaqMask::from_bits(index >> n_layers, width),
            static_cast<std::uint32_t>(index & (width - 1))};
  }
  // Counter-based draws keep case i independent of how the range is split.
  std::uint64_t state = sampling.seed ^ splitmix64(index);
  DaqMask mask(width);
  for (std::uint32_t base = 0; base < width; base += 64) {
    state = splitmix64(state);
    for (std::uint32_t b = 0; b < 64 && base + b < width; ++b) {
      mask.set(base + b, (state >> b) & 1u);
    }
  }
  state = splitmix64(state);
  return {std::move(mask), static_cast<std::uint32_t>(state % width)};
}

namespace {

SweepReport sweep_range(const Topology& t, const Sampling& sampling,
                        std::uint64_t begin, std::uint64_t end) {
  SweepReport r;
  r.n_layers = t.n_layers();
  for (std::uint64_t i = begin; i < end; ++i) {
    auto [mask, start] = sweep_case(t.n_layers(), sampling, i);
    ++r.cases_total;
    const RouteResult routed = compute_config(t, mask, start);
    if (!routed) {
      ++r.collisions;
      if (r.failures.size() < SweepReport::kMaxFailures) {
        r.failures.push_back({i, mask.to_string(), start, true,
                              routed.collision().layer,
                              routed.collision().switch_index});
      }
      continue;
    }
    if (!solves_task(oracle_route(t, routed.plan().modes), mask, start)) {
      ++r.misroutes;
      if (r.failures.size() < SweepReport::kMaxFailures) {
        r.failures.push_back({i, mask.to_string(), start, false, 0, 0});
      }
      continue;
    }
    ++r.cases_passed;
  }
  return r;
}

}  // namespace

SweepReport sweep_collision_freedom(unsigned n_layers, const Sampling& sampling,
                                    unsigned workers) {
  const Topology t = build_topology(n_layers);
  std::uint64_t total = 0;
  if (sampling.kind == Sampling::Kind::kExhaustive) {
    if (n_layers > 4) {
      throw std::invalid_argument("exhaustive sweeps are limited to N <= 4");
    }
    total = exhaustive_case_count(n_layers);
  } else {
    total = sampling.count;
  }

  workers = std::max(1u, workers);
  const std::uint64_t chunk = (total + workers - 1) / workers;
  std::vector<SweepReport> parts(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(total, w * chunk);
    const std::uint64_t end = std::min(total, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      parts[w] = sweep_range(t, sampling, begin, end);
    });
  }
  for (auto& th : pool) th.join();

  SweepReport report;
  report.n_layers = n_layers;
  for (const auto& p : parts) report.merge(p);
  return report;
}

CoverageReport exhaustive_config_search(unsigned n_layers) {
  if (n_layers > 3) {
    throw std::invalid_argument(
        "configuration-space search is limited to N <= 3");
  }
  const Topology t = build_topology(n_layers);
  const std::uint32_t width = t.ports();
  const std::uint32_t n_switches = t.switch_count();

  CoverageReport report;
  report.n_layers = n_layers;
  report.configurations = std::uint64_t{1} << n_switches;
  report.solutions.assign(exhaustive_case_count(n_layers), 0);

  std::vector<SwitchMode> modes(n_switches);
  for (std::uint64_t cfg = 0; cfg < report.configurations; ++cfg) {
    for (std::uint32_t s = 0; s < n_switches; ++s) {
      modes[s] = ((cfg >> s) & 1u) ? SwitchMode::kCross : SwitchMode::kBar;
    }
    const auto perm = oracle_route(t, modes);
    for (std::uint64_t task = 0; task < report.solutions.size(); ++task) {
      const std::uint64_t mask = task >> n_layers;
      const auto start = static_cast<std::uint32_t>(task & (width - 1));
      if (solves_task(perm, DaqMask::from_bits(mask, width), start)) {
        ++report.solutions[task];
      }
    }
  }
  report.uncovered = static_cast<std::uint64_t>(
      std::count(report.solutions.begin(), report.solutions.end(), 0u));
  return report;
}

std::uint32_t pack_modes(const std::vector<SwitchMode>& modes) {
  if (modes.size() > 32) throw std::invalid_argument("more than 32 switches");
  std::uint32_t word = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] == SwitchMode::kCross) word |= std::uint32_t{1} << i;
  }
  return word;
}

std::vector<SwitchMode> unpack_modes(std::uint32_t word, unsigned n_layers) {
  const std::uint32_t n_switches = n_layers * (1u << (n_layers - 1));
  std::vector<SwitchMode> modes(n_switches);
  for (std::uint32_t i = 0; i < n_switches; ++i) {
    modes[i] = ((word >> i) & 1u) ? SwitchMode::kCross : SwitchMode::kBar;
  }
  return modes;
}

ConfigTable generate_table(unsigned n_layers) {
  if (n_layers > 4) {
    throw std::invalid_argument("configuration tables are limited to N <= 4");
  }
  const Topology t = build_topology(n_layers);
  ConfigTable table;
  table.n_layers = n_layers;
  table.entry_bits = t.switch_count();
  const std::uint64_t total = exhaustive_case_count(n_layers);
  table.entries.resize(total);
  const Sampling all = Sampling::exhaustive();
  for (std::uint64_t i = 0; i < total; ++i) {
    auto [mask, start] = sweep_case(n_layers, all, i);
    table.entries[i] = pack_modes(compute_config(t, mask, start).plan().modes);
  }
  return table;
}

SweepReport revalidate_table(const ConfigTable& table) {
  const Topology t = build_topology(table.n_layers);
  SweepReport r;
  r.n_layers = table.n_layers;
  const Sampling all = Sampling::exhaustive();
  for (std::uint64_t i = 0; i < table.entries.size(); ++i) {
    auto [mask, start] = sweep_case(table.n_layers, all, i);
    ++r.cases_total;
    const auto perm = oracle_route(t, unpack_modes(table.entries[i], table.n_layers));
    if (solves_task(perm, mask, start)) {
      ++r.cases_passed;
    } else {
      ++r.misroutes;
      if (r.failures.size() < SweepReport::kMaxFailures) {
        r.failures.push_back({i, mask.to_string(), start, false, 0, 0});
      }
    }
  }
  return r;
}

namespace {

constexpr char kTableMagic[4] = {'B', 'N', 'R', 'T'};
constexpr std::uint16_t kTableVersion = 1;

void put_le(std::ostream& os, std::uint64_t value, unsigned bytes) {
  for (unsigned b = 0; b < bytes; ++b) {
    os.put(static_cast<char>((value >> (8 * b)) & 0xFF));
  }
}

std::uint64_t get_le(const unsigned char* p, unsigned bytes) {
  std::uint64_t v = 0;
  for (unsigned b = 0; b < bytes; ++b) v |= std::uint64_t{p[b]} << (8 * b);
  return v;
}

}  // namespace

void write_table(std::ostream& os, const ConfigTable& table) {
  const unsigned entry_bytes = (table.entry_bits + 7) / 8;
  os.write(kTableMagic, 4);
  put_le(os, kTableVersion, 2);
  put_le(os, table.n_layers, 1);
  put_le(os, table.entry_bits, 1);
  put_le(os, table.entries.size(), 4);
  put_le(os, entry_bytes, 4);
  for (std::uint32_t e : table.entries) put_le(os, e, entry_bytes);
}

ConfigTable read_table(std::istream& is) {
  unsigned char header[kTableHeaderBytes];
  if (!is.read(reinterpret_cast<char*>(header), kTableHeaderBytes) ||
      !std::equal(kTableMagic, kTableMagic + 4, header)) {
    throw std::runtime_error("not a BNRT configuration table");
  }
  if (get_le(header + 4, 2) != kTableVersion) {
    throw std::runtime_error("unsupported table version");
  }
  ConfigTable table;
  table.n_layers = header[6];
  table.entry_bits = header[7];
  const std::uint64_t count = get_le(header + 8, 4);
  const auto entry_bytes = static_cast<unsigned>(get_le(header + 12, 4));
  if (table.n_layers < 1 || table.n_layers > 4 ||
      table.entry_bits != table.n_layers * (1u << (table.n_layers - 1)) ||
      entry_bytes != (table.entry_bits + 7) / 8 ||
      count != exhaustive_case_count(table.n_layers)) {
    throw std::runtime_error("inconsistent table header");
  }
  std::vector<unsigned char> raw(count * entry_bytes);
  if (!is.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw std::runtime_error("truncated table data");
  }
  table.entries.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    table.entries[i] =
        static_cast<std::uint32_t>(get_le(raw.data() + i * entry_bytes, entry_bytes));
  }
  return table;
}

std::string sweep_report_json(const SweepReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "bnro-sweep-v1";
  j["n_layers"] = report.n_layers;
  j["cases_total"] = report.cases_total;
  j["cases_passed"] = report.cases_passed;
  j["collisions"] = report.collisions;
  j["misroutes"] = report.misroutes;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : report.failures) {
    j["failures"].push_back({{"case", f.case_index},
                             {"mask", f.mask},
                             {"start", f.start},
                             {"kind", f.collision ? "collision" : "misroute"},
                             {"layer", f.layer},
                             {"switch", f.switch_index}});
  }
  return j.dump(2);
}

std::string coverage_report_json(const CoverageReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "bnro-coverage-v1";
  j["n_layers"] = report.n_layers;
  j["configurations"] = report.configurations;
  j["tasks"] = report.solutions.size();
  j["uncovered"] = report.uncovered;
  if (!report.solutions.empty()) {
    j["min_solutions"] =
        *std::min_element(report.solutions.begin(), report.solutions.end());
    j["max_solutions"] =
        *std::max_element(report.solutions.begin(), report.solutions.end());
  }
  return j.dump(2);
}

}  // namespace bnro
