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

// Energy dispersion index (EDI) of individual symbol blocks.
//
// For a window of W+1 symbols (W even) the windowed energy g_i is the sum of
// |x_j|^2 over the window centred on symbol i, for i = W/2 .. n-1-W/2
// (0-based). The EDI estimate is the unbiased sample variance of g divided
// by its sample mean.

#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paslab/error.hpp"

namespace paslab {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct WindowedEnergy {
  std::vector<double> values;
  int window = 0;
};

struct EdiValue {
  double linear = 0.0;
  /// 10 log10(linear); -inf when linear == 0.
  double db = -std::numeric_limits<double>::infinity();

  static EdiValue from_linear(double lin) {
    return {lin, lin > 0.0 ? 10.0 * std::log10(lin) : -std::numeric_limits<double>::infinity()};
  }
};

/// W = 100 for blocks of at least 600 symbols, W = 10 otherwise.
inline int default_window(int n) { return n >= 600 ? 100 : 10; }

namespace detail {
inline void check_window(std::size_t n, int window) {
  if (window <= 0 || window % 2 != 0) {
    throw ConfigError("EDI window length must be a positive even integer, got " + std::to_string(window));
  }
  if (static_cast<std::size_t>(window) >= n) {
    throw ConfigError("EDI window length " + std::to_string(window) +
                      " must be smaller than the blocklength " + std::to_string(n));
  }
}
}  // namespace detail

/// Sliding windowed energies from per-symbol energies, O(n).
inline WindowedEnergy windowed_energies_from_energy(std::span<const double> energy, int window) {
  detail::check_window(energy.size(), window);
  const std::size_t span = static_cast<std::size_t>(window) + 1;
  WindowedEnergy out;
  out.window = window;
  out.values.reserve(energy.size() - static_cast<std::size_t>(window));
  CompensatedSum running;
  for (std::size_t j = 0; j < span; ++j) running.add(energy[j]);
  out.values.push_back(running.value());
  for (std::size_t j = span; j < energy.size(); ++j) {
    running.add(energy[j]);
    running.add(-energy[j - span]);
    out.values.push_back(running.value());
  }
  return out;
}

inline std::vector<double> symbol_energies(std::span<const std::complex<double>> x) {
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = std::norm(x[i]);
  return e;
}

inline WindowedEnergy windowed_energies(std::span<const std::complex<double>> x, int window) {
  const auto e = symbol_energies(x);
  return windowed_energies_from_energy(e, window);
}

/// EDI estimate from per-symbol energies.
inline EdiValue edi_from_energy(std::span<const double> energy, int window) {
  detail::check_window(energy.size(), window);
  const std::size_t count = energy.size() - static_cast<std::size_t>(window);
  if (count < 2) {
    throw DegenerateInput("EDI: n - W must be at least 2 for the variance estimate");
  }
  const auto g = windowed_energies_from_energy(energy, window);
  CompensatedSum s;
  for (double v : g.values) s.add(v);
  const double mean = s.value() / double(count);
  if (!(mean > 0.0)) throw DegenerateInput("EDI: windowed energy mean is zero");
  CompensatedSum sq;
  for (double v : g.values) sq.add((v - mean) * (v - mean));
  const double variance = sq.value() / double(count - 1);
  return EdiValue::from_linear(variance / mean);
}

inline EdiValue edi_estimate(std::span<const std::complex<double>> x, int window) {
  const auto e = symbol_energies(x);
  return edi_from_energy(e, window);
}

/// Exact EDI of integer symbol energies, kept as the fraction
/// (N sum g^2 - (sum g)^2) / ((N-1) sum g) so that candidates can be
/// compared without rounding.
struct ExactEdi {
  __int128 numerator = 0;
  __int128 denominator = 1;

  [[nodiscard]] double linear() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator<(const ExactEdi& a, const ExactEdi& b) noexcept {
    return a.numerator * b.denominator < b.numerator * a.denominator;
  }
  friend bool operator==(const ExactEdi& a, const ExactEdi& b) noexcept {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

inline ExactEdi edi_exact(std::span<const std::int64_t> energy, int window) {
  detail::check_window(energy.size(), window);
  const std::size_t span = static_cast<std::size_t>(window) + 1;
  const std::size_t count = energy.size() - static_cast<std::size_t>(window);
  if (count < 2) throw DegenerateInput("EDI: n - W must be at least 2 for the variance estimate");
  std::int64_t g = 0;
  for (std::size_t j = 0; j < span; ++j) g += energy[j];
  __int128 sum = g;
  __int128 sum_sq = static_cast<__int128>(g) * g;
  for (std::size_t j = span; j < energy.size(); ++j) {
    g += energy[j] - energy[j - span];
    sum += g;
    sum_sq += static_cast<__int128>(g) * g;
  }
  if (sum == 0) throw DegenerateInput("EDI: windowed energy mean is zero");
  const auto n = static_cast<__int128>(count);
  return {n * sum_sq - sum * sum, (n - 1) * sum};
}

/// Mean of per-block linear EDI values, in dB.
inline double mean_edi_db(std::span<const std::vector<std::complex<double>>> blocks, int window) {
  if (blocks.empty()) throw DegenerateInput("mean_edi_db: no blocks");
  const std::size_t n = blocks.front().size();
  double acc = 0.0;
  for (const auto& b : blocks) {
    if (b.size() != n) throw ConfigError("mean_edi_db: blocks differ in length");
    acc += edi_estimate(b, window).linear;
  }
  return EdiValue::from_linear(acc / double(blocks.size())).db;
}

inline double mean_linear_to_db(std::span<const double> linear_values) {
  if (linear_values.empty()) throw DegenerateInput("mean EDI: no values");
  double acc = 0.0;
  for (double v : linear_values) acc += v;
  return EdiValue::from_linear(acc / double(linear_values.size())).db;
}

/// Incremental windowed energy: push symbol energies one at a time and
/// receive g for each newly completed window.
class WindowedEnergyStream {
 public:
  explicit WindowedEnergyStream(int window) : span_(static_cast<std::size_t>(window) + 1) {
    if (window <= 0 || window % 2 != 0) throw ConfigError("window must be positive and even");
  }

  std::optional<double> push(double energy) {
    buffer_.push_back(energy);
    running_.add(energy);
    if (buffer_.size() > span_) {
      running_.add(-buffer_.front());
      buffer_.pop_front();
    }
    if (buffer_.size() == span_) return running_.value();
    return std::nullopt;
  }

 private:
  std::size_t span_;
  std::deque<double> buffer_;
  CompensatedSum running_;
};

}  // namespace paslab
