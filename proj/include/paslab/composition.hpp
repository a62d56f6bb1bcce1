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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "paslab/error.hpp"

namespace paslab {

/// Length-n sequence of (unsigned) amplitudes.
using AmplitudeBlock = std::vector<int>;

/// Amplitude alphabet together with the number of times each amplitude
/// occurs in every codeword. Defines a constant-composition codebook.
class Composition {
 public:
  Composition() = default;

  Composition(std::vector<int> alphabet, std::vector<int> counts)
      : alphabet_(std::move(alphabet)), counts_(std::move(counts)) {
    if (alphabet_.empty()) throw ConfigError("Composition: empty alphabet");
    if (alphabet_.size() != counts_.size()) {
      throw ConfigError("Composition: alphabet and counts differ in size");
    }
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      if (alphabet_[i] <= 0) throw ConfigError("Composition: amplitudes must be positive");
      if (i > 0 && alphabet_[i] <= alphabet_[i - 1]) {
        throw ConfigError("Composition: alphabet must be strictly increasing");
      }
      if (counts_[i] < 0) throw ConfigError("Composition: negative count");
    }
    n_ = std::accumulate(counts_.begin(), counts_.end(), 0);
    if (n_ == 0) throw ConfigError("Composition: blocklength is zero");
  }

  /// Odd-integer amplitude alphabet {1, 3, ..., 2m-1} of a 2m-PAM constellation.
  static std::vector<int> pam_alphabet(int num_amplitudes) {
    std::vector<int> a(static_cast<std::size_t>(num_amplitudes));
    for (int i = 0; i < num_amplitudes; ++i) a[static_cast<std::size_t>(i)] = 2 * i + 1;
    return a;
  }

  [[nodiscard]] const std::vector<int>& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] const std::vector<int>& counts() const noexcept { return counts_; }
  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return alphabet_.size(); }

  /// Index of `amplitude` in the alphabet, or -1.
  [[nodiscard]] int index_of(int amplitude) const noexcept {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), amplitude);
    if (it == alphabet_.end() || *it != amplitude) return -1;
    return static_cast<int>(it - alphabet_.begin());
  }

  [[nodiscard]] std::vector<double> probabilities() const {
    std::vector<double> p(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) p[i] = double(counts_[i]) / n_;
    return p;
  }

  /// Entropy of the empirical amplitude distribution n_a/n, in bits.
  [[nodiscard]] double entropy_bits() const {
    double h = 0.0;
    for (int c : counts_) {
      if (c > 0) {
        const double p = double(c) / n_;
        h -= p * std::log2(p);
      }
    }
    return h;
  }

  /// E[a^2] under n_a/n.
  [[nodiscard]] double second_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      s += double(counts_[i]) * alphabet_[i] * alphabet_[i];
    }
    return s / n_;
  }

  /// True when `block` is a permutation of this composition's multiset.
  [[nodiscard]] bool matches(const AmplitudeBlock& block) const {
    if (block.size() != static_cast<std::size_t>(n_)) return false;
    std::vector<int> seen(counts_.size(), 0);
    for (int a : block) {
      const int idx = index_of(a);
      if (idx < 0) return false;
      ++seen[static_cast<std::size_t>(idx)];
    }
    return seen == counts_;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(alphabet_[i]) + ":" + std::to_string(counts_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<int> alphabet_;
  std::vector<int> counts_;
  int n_ = 0;
};

}  // namespace paslab
