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

// Synthetic input traces and output validation.
//
// Each cycle every input independently accepts a DAQ word with its own
// probability. Accepted inputs receive consecutive payloads 0, 1, 2, ... in
// cycle-major, input-minor order, so a correct concentrator emits exactly the
// consecutive integers.
//
// Randomness: std::mt19937_64 seeded with the configured seed. A draw is
// accepted when (x >> 11) * 2^-53 < probability, which gives the same
// trace on every platform.

#ifndef BNRO_STREAMS_HPP_
#define BNRO_STREAMS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "bnro/data_word.hpp"

namespace bnro {

struct GeneratorConfig {
  std::uint32_t n_inputs = 16;
  // One entry per input, or a single entry applied to every input.
  std::vector<double> daq_probability{1.0};
  std::uint64_t seed = 1;
  std::uint64_t total_cycles = 0;

  /// Throws std::invalid_argument for probabilities outside [0, 1] or a
  /// per-input list of the wrong length.
  void validate() const;
  double probability(std::uint32_t input) const;
};

using Trace = std::vector<InputVector>;

/// Streaming form of gen_trace().
class TraceGenerator {
 public:
  explicit TraceGenerator(GeneratorConfig cfg);

  bool done() const { return cycle_ >= cfg_.total_cycles; }
  InputVector next();
  std::uint64_t cycle() const { return cycle_; }
  std::uint64_t next_payload() const { return next_payload_; }

 private:
  GeneratorConfig cfg_;
  std::mt19937_64 rng_;
  std::uint64_t cycle_ = 0;
  std::uint64_t next_payload_ = 0;
};

Trace gen_trace(const GeneratorConfig& cfg);

struct ValidationError {
  std::uint64_t position = 0;  // record * width + slot
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;

  friend bool operator==(const ValidationError&,
                         const ValidationError&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::uint64_t words_checked = 0;
  std::optional<ValidationError> first_error;
  std::uint64_t holes = 0;
};

/// Checks that the records, flattened slot by slot, hold the payloads
/// 0, 1, 2, ... with no empty slot. Only the last record may be partial; its
/// slots at or beyond its occupancy are not checked.
ValidationReport validate(const std::vector<OutputRecord>& records);

/// Incremental form of validate() for long runs.
class StreamValidator {
 public:
  void add(const OutputRecord& record, bool final_partial = false);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
  std::uint64_t expected_ = 0;
  std::uint64_t position_ = 0;
};

// Line formats, each preceded by one versioned header line:
//   trace:   "# bnro-trace v1 inputs=W", then "cycle,input,kind,payload"
//            per word, kind being "daq" or "non_daq".
//   records: "# bnro-records v1 width=W", then "record,slot,source,payload"
//            per filled slot.
void write_trace(std::ostream& os, const Trace& trace);
/// Throws std::runtime_error on malformed input.
Trace read_trace(std::istream& is);
void write_records(std::ostream& os, const std::vector<OutputRecord>& records);
/// Streaming pieces of write_records().
void write_records_header(std::ostream& os, std::size_t width);
void write_record_rows(std::ostream& os, std::size_t record_index,
                       const OutputRecord& record);
/// "ok,words_checked,holes,error_position,expected,actual" header + one row.
void write_report_csv(std::ostream& os, const ValidationReport& report);

}  // namespace bnro

#endif  // BNRO_STREAMS_HPP_
