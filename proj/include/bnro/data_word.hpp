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

#ifndef BNRO_DATA_WORD_HPP_
#define BNRO_DATA_WORD_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace bnro {

enum class WordKind : std::uint8_t { kDaq, kNonDaq };

/// One word delivered by an input link in one concentration cycle.
struct DataWord {
  std::uint64_t payload = 0;
  std::uint32_t source_id = 0;
  WordKind kind = WordKind::kNonDaq;

  bool is_daq() const { return kind == WordKind::kDaq; }

  static DataWord daq(std::uint64_t payload, std::uint32_t source) {
    return {payload, source, WordKind::kDaq};
  }
  static DataWord non_daq(std::uint32_t source) {
    return {0, source, WordKind::kNonDaq};
  }

  friend bool operator==(const DataWord&, const DataWord&) = default;
};

/// Per-cycle input vector, one word per network input.
using InputVector = std::vector<DataWord>;

/// A wide output word assembled from DAQ words. A completed record has every
/// slot filled; a partial record (end-of-stream flush) fills slots
/// [0, occupancy).
struct OutputRecord {
  std::vector<std::optional<DataWord>> slots;
  std::size_t occupancy = 0;

  OutputRecord() = default;
  explicit OutputRecord(std::size_t width) : slots(width) {}

  std::size_t width() const { return slots.size(); }
  bool complete() const { return occupancy == slots.size(); }

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

}  // namespace bnro

#endif  // BNRO_DATA_WORD_HPP_
