// Copyright 2026 The paslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "paslab/error.hpp"

namespace paslab {

/// Ordered binary sequence, interpreted MSB-first wherever an integer is
/// needed.
class BitBlock {
 public:
  BitBlock() = default;
  explicit BitBlock(std::size_t length) : bits_(length, 0) {}
  explicit BitBlock(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
      if (b > 1) throw ConfigError("BitBlock: entries must be 0 or 1");
    }
  }

  static BitBlock from_string(std::string_view s) {
    BitBlock out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') {
        throw ConfigError("BitBlock: expected a 0/1 string, got '" + std::string(s) + "'");
      }
      out.bits_[i] = static_cast<std::uint8_t>(s[i] - '0');
    }
    return out;
  }

  /// Writes the low `length` bits of `value`, MSB first.
  static BitBlock from_integer(const mpz_class& value, std::size_t length) {
    if (value < 0 || (value != 0 && mpz_sizeinbase(value.get_mpz_t(), 2) > length)) {
      throw RankOutOfRange("BitBlock: value does not fit in " + std::to_string(length) + " bits");
    }
    BitBlock out(length);
    for (std::size_t i = 0; i < length; ++i) {
      out.bits_[length - 1 - i] = static_cast<std::uint8_t>(mpz_tstbit(value.get_mpz_t(), i));
    }
    return out;
  }

  [[nodiscard]] mpz_class to_integer() const {
    mpz_class v = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) mpz_setbit(v.get_mpz_t(), bits_.size() - 1 - i);
    }
    return v;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
  }

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
  [[nodiscard]] std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  [[nodiscard]] const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  /// Concatenation `[*this | tail]`.
  [[nodiscard]] BitBlock concat(const BitBlock& tail) const {
    std::vector<std::uint8_t> v = bits_;
    v.insert(v.end(), tail.bits_.begin(), tail.bits_.end());
    return BitBlock(std::move(v));
  }

  [[nodiscard]] BitBlock slice(std::size_t first, std::size_t count) const {
    return BitBlock(std::vector<std::uint8_t>(bits_.begin() + first, bits_.begin() + first + count));
  }

  friend bool operator==(const BitBlock&, const BitBlock&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace paslab
