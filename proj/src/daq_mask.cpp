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

#include "bnro/daq_mask.hpp"

#include <algorithm>
#include <stdexcept>

namespace bnro {

DaqMask DaqMask::from_bits(std::uint64_t bits, std::size_t width) {
  if (width > 64) throw std::invalid_argument("mask wider than 64 bits");
  DaqMask mask(width);
  for (std::size_t i = 0; i < width; ++i) mask.bits_[i] = (bits >> i) & 1u;
  return mask;
}

DaqMask DaqMask::from_inputs(const InputVector& inputs) {
  DaqMask mask(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    mask.bits_[i] = inputs[i].is_daq();
  }
  return mask;
}

DaqMask DaqMask::from_string(const std::string& text) {
  DaqMask mask(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw std::invalid_argument("mask string must contain only 0 and 1");
    }
    mask.bits_[i] = text[i] == '1';
  }
  return mask;
}

std::size_t DaqMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string DaqMask::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::uint64_t DaqMask::to_bits() const {
  if (bits_.size() > 64) throw std::logic_error("mask wider than 64 bits");
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out |= std::uint64_t{1} << i;
  }
  return out;
}

}  // namespace bnro
