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

#ifndef BNRO_DAQ_MASK_HPP_
#define BNRO_DAQ_MASK_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bnro/data_word.hpp"

namespace bnro {

/// Which network inputs carry a DAQ word in the current cycle. Bit i of the
/// mask corresponds to network input i.
class DaqMask {
 public:
  DaqMask() = default;
  explicit DaqMask(std::size_t width) : bits_(width, false) {}

  /// Low `width` bits of `bits`; width must be at most 64.
  static DaqMask from_bits(std::uint64_t bits, std::size_t width);
  static DaqMask from_inputs(const InputVector& inputs);
  /// Parses a string such as "11111000" where character i is input i.
  static DaqMask from_string(const std::string& text);

  std::size_t width() const { return bits_.size(); }
  bool test(std::size_t input) const { return bits_.at(input); }
  void set(std::size_t input, bool value = true) { bits_.at(input) = value; }
  std::size_t count() const;
  bool none() const { return count() == 0; }

  /// Character i is '1' when input i is active.
  std::string to_string() const;
  /// Packs into an integer with input i at bit i; width must be at most 64.
  std::uint64_t to_bits() const;

  friend bool operator==(const DaqMask&, const DaqMask&) = default;

 private:
  std::vector<bool> bits_;
};

}  // namespace bnro

#endif  // BNRO_DAQ_MASK_HPP_
