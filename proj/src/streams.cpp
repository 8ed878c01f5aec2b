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

#include "bnro/streams.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bnro {

void GeneratorConfig::validate() const {
  if (n_inputs == 0) throw std::invalid_argument("n_inputs must be positive");
  if (daq_probability.size() != 1 && daq_probability.size() != n_inputs) {
    throw std::invalid_argument(
        "need one probability or one per input (" + std::to_string(n_inputs) +
        "), got " + std::to_string(daq_probability.size()));
  }
  for (double p : daq_probability) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability " + std::to_string(p) +
                                  " outside [0, 1]");
    }
  }
}

double GeneratorConfig::probability(std::uint32_t input) const {
  return daq_probability.size() == 1 ? daq_probability.front()
                                     : daq_probability.at(input);
}

TraceGenerator::TraceGenerator(GeneratorConfig cfg)
    : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate();
}

InputVector TraceGenerator::next() {
  InputVector words(cfg_.n_inputs);
  for (std::uint32_t k = 0; k < cfg_.n_inputs; ++k) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    words[k] = u < cfg_.probability(k) ? DataWord::daq(next_payload_++, k)
                                       : DataWord::non_daq(k);
  }
  ++cycle_;
  return words;
}

Trace gen_trace(const GeneratorConfig& cfg) {
  TraceGenerator gen(cfg);
  Trace trace;
  trace.reserve(cfg.total_cycles);
  while (!gen.done()) trace.push_back(gen.next());
  return trace;
}

void StreamValidator::add(const OutputRecord& record, bool final_partial) {
  const std::size_t limit = final_partial ? record.occupancy : record.width();
  for (std::size_t i = 0; i < record.width(); ++i, ++position_) {
    if (i >= limit) continue;
    const auto& slot = record.slots[i];
    if (!slot) {
      ++report_.holes;
      report_.ok = false;
      continue;
    }
    ++report_.words_checked;
    const std::uint64_t actual = slot->is_daq() ? slot->payload : ~std::uint64_t{0};
    if (actual != expected_ && !report_.first_error) {
      report_.first_error = ValidationError{position_, expected_, actual};
      report_.ok = false;
    }
    ++expected_;
  }
}

ValidationReport validate(const std::vector<OutputRecord>& records) {
  StreamValidator v;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const bool last = r + 1 == records.size();
    v.add(records[r], last && !records[r].complete());
  }
  return v.report();
}

void write_trace(std::ostream& os, const Trace& trace) {
  const std::size_t width = trace.empty() ? 0 : trace.front().size();
  os << "# bnro-trace v1 inputs=" << width << "\n";
  for (std::size_t c = 0; c < trace.size(); ++c) {
    for (std::size_t k = 0; k < trace[c].size(); ++k) {
      const DataWord& w = trace[c][k];
      os << c << "," << k << "," << (w.is_daq() ? "daq" : "non_daq") << ","
         << w.payload << "\n";
    }
  }
}

Trace read_trace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# bnro-trace v1 inputs=", 0) != 0) {
    throw std::runtime_error("missing bnro-trace v1 header");
  }
  const std::size_t width = std::stoul(line.substr(line.find('=') + 1));
  Trace trace;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cycle, input, kind, payload;
    if (!std::getline(fields, cycle, ',') || !std::getline(fields, input, ',') ||
        !std::getline(fields, kind, ',') || !std::getline(fields, payload)) {
      throw std::runtime_error("malformed trace line " + std::to_string(row));
    }
    const std::size_t c = std::stoul(cycle);
    const std::size_t k = std::stoul(input);
    if (k >= width || c > trace.size()) {
      throw std::runtime_error("out-of-order trace line " + std::to_string(row));
    }
    if (c == trace.size()) trace.emplace_back(width);
    DataWord& w = trace[c][k];
    w.source_id = static_cast<std::uint32_t>(k);
    w.payload = std::stoull(payload);
    if (kind == "daq") {
      w.kind = WordKind::kDaq;
    } else if (kind == "non_daq") {
      w.kind = WordKind::kNonDaq;
    } else {
      throw std::runtime_error("unknown word kind on line " + std::to_string(row));
    }
  }
  return trace;
}

void write_records_header(std::ostream& os, std::size_t width) {
  os << "# bnro-records v1 width=" << width << "\n";
}

void write_record_rows(std::ostream& os, std::size_t record_index,
                       const OutputRecord& record) {
  for (std::size_t s = 0; s < record.width(); ++s) {
    const auto& slot = record.slots[s];
    if (!slot) continue;
    os << record_index << "," << s << "," << slot->source_id << ","
       << slot->payload << "\n";
  }
}

void write_records(std::ostream& os, const std::vector<OutputRecord>& records) {
  write_records_header(os, records.empty() ? 0 : records.front().width());
  for (std::size_t r = 0; r < records.size(); ++r) {
    write_record_rows(os, r, records[r]);
  }
}

void write_report_csv(std::ostream& os, const ValidationReport& report) {
  os << "ok,words_checked,holes,error_position,expected,actual\n";
  os << (report.ok ? 1 : 0) << "," << report.words_checked << ","
     << report.holes << ",";
  if (report.first_error) {
    os << report.first_error->position << "," << report.first_error->expected
       << "," << report.first_error->actual;
  } else {
    os << ",,";
  }
  os << "\n";
}

}  // namespace bnro
