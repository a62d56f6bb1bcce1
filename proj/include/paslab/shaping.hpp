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

// Maxwell-Boltzmann amplitude distributions, n-type quantization into
// compositions, rate-loss bookkeeping and the rate-matching search that
// pairs a target shaping rate with a composition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "paslab/ccdm.hpp"
#include "paslab/composition.hpp"
#include "paslab/error.hpp"

namespace paslab {

inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

struct AmplitudeDistribution {
  std::vector<int> alphabet;
  std::vector<double> probabilities;
  double entropy_bits = 0.0;
};

/// P(a) proportional to exp(-lambda a^2).
inline AmplitudeDistribution mb_distribution(double lambda, const std::vector<int>& alphabet) {
  if (alphabet.empty()) throw ConfigError("mb_distribution: empty alphabet");
  if (lambda < 0.0) throw ConfigError("mb_distribution: lambda must be non-negative");
  AmplitudeDistribution d;
  d.alphabet = alphabet;
  d.probabilities.resize(alphabet.size());
  // Shift exponents by the smallest amplitude to avoid underflow at large lambda.
  const double a0 = double(alphabet.front()) * alphabet.front();
  double z = 0.0;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i] <= 0) throw ConfigError("mb_distribution: amplitudes must be positive");
    d.probabilities[i] = std::exp(-lambda * (double(alphabet[i]) * alphabet[i] - a0));
    z += d.probabilities[i];
  }
  for (auto& p : d.probabilities) p /= z;
  d.entropy_bits = paslab::entropy_bits(d.probabilities);
  return d;
}

/// Bisection on lambda; entropy is strictly decreasing in lambda >= 0.
inline double solve_lambda_for_entropy(double target_bits, const std::vector<int>& alphabet) {
  const double h_max = std::log2(double(alphabet.size()));
  if (!(target_bits > 0.0) || target_bits > h_max + 1e-12) {
    throw ConfigError("solve_lambda_for_entropy: target " + std::to_string(target_bits) +
                      " outside (0, " + std::to_string(h_max) + "]");
  }
  if (target_bits >= h_max - 1e-12) return 0.0;
  auto entropy_at = [&](double l) { return mb_distribution(l, alphabet).entropy_bits; };
  double lo = 0.0;
  double hi = 1e-3;
  while (entropy_at(hi) > target_bits) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw ConfigError("solve_lambda_for_entropy: target entropy too small");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = entropy_at(mid);
    if (std::abs(h - target_bits) <= 1e-12) return mid;
    if (h > target_bits) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

/// n-type quantization by largest-remainder rounding. Ties in the fractional
/// part go to the smaller amplitude.
inline Composition composition_from_distribution(const AmplitudeDistribution& p, int n) {
  if (n <= 0) throw ConfigError("composition_from_distribution: n must be positive");
  const std::size_t m = p.probabilities.size();
  std::vector<int> counts(m);
  std::vector<double> frac(m);
  int assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double target = double(n) * p.probabilities[i];
    // Guard against representation error such as 0.3 * 10 = 2.9999999999999996.
    const double nearest = std::round(target);
    const double t = std::abs(target - nearest) < 1e-9 ? nearest : target;
    counts[i] = static_cast<int>(std::floor(t));
    frac[i] = t - counts[i];
    assigned += counts[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t j = 0; assigned < n; ++j) {
    ++counts[order[j % m]];
    ++assigned;
  }
  return Composition(p.alphabet, counts);
}

/// H(P_A) - k/n.
inline double rate_loss(double entropy, int k, int n) { return entropy - double(k) / double(n); }

/// H(P_A) - k/n + v/n.
inline double lccdm_rate_loss(double entropy, int k, int n, int v) {
  if (v < 0 || v >= k) throw ConfigError("lccdm_rate_loss: requires 0 <= v < k");
  return rate_loss(entropy, k, n) + double(v) / double(n);
}

/// Information rate (k - v)/n together with its parameters.
struct RateSpec {
  int n = 0;
  int k = 0;
  int v = 0;
  [[nodiscard]] double shaping_rate() const { return double(k - v) / double(n); }
};

/// Input length k = n R_s + v, rejected unless integral.
inline int input_length_for_rate(double shaping_rate, int n, int v) {
  const double exact = double(n) * shaping_rate;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-6) {
    throw ConfigError("n * R_s = " + std::to_string(exact) + " is not an integer (n=" +
                      std::to_string(n) + ", R_s=" + std::to_string(shaping_rate) + ")");
  }
  return static_cast<int>(rounded) + v;
}

/// log2 of the codebook size via lgamma; used only to steer the search.
inline double approx_log2_codebook(const Composition& c) {
  double l = std::lgamma(double(c.n()) + 1.0);
  for (int count : c.counts()) l -= std::lgamma(double(count) + 1.0);
  return l / std::log(2.0);
}

struct ShapingDesign {
  Composition composition;
  RateSpec rate;
  double lambda = 0.0;
  double entropy_bits = 0.0;  // H(n_a / n)
  double rate_loss = 0.0;     // includes the v/n flipping term
  int max_input_length = 0;
};

/// Rate matching: k = n R_s + v, then the largest lambda (smallest entropy)
/// whose quantized MB composition has at least 2^k codewords. The scan
/// starts where H(lambda) = k/n and walks lambda downward.
inline ShapingDesign design_shaping(int num_amplitudes, double shaping_rate, int n, int v) {
  if (num_amplitudes < 1) throw ConfigError("design: need at least one amplitude");
  if (v < 0) throw ConfigError("design: v must be non-negative");
  const auto alphabet = Composition::pam_alphabet(num_amplitudes);
  const int k = input_length_for_rate(shaping_rate, n, v);
  if (v >= k && k > 0) throw ConfigError("design: v must be smaller than k");
  const double h_max = std::log2(double(num_amplitudes));
  const double start_entropy = double(k) / double(n);
  if (start_entropy > h_max) {
    throw ConfigError("design: k/n = " + std::to_string(start_entropy) + " exceeds log2 of the alphabet size");
  }
  double lambda = start_entropy > 0.0 ? solve_lambda_for_entropy(start_entropy, alphabet) : 1e3;
  const double step = std::max(lambda, 1e-6) * 1e-5;
  for (;;) {
    const auto comp = composition_from_distribution(mb_distribution(lambda, alphabet), n);
    if (approx_log2_codebook(comp) >= double(k) - 1e-6 && max_input_length(comp) >= k) {
      ShapingDesign d{comp, RateSpec{n, k, v}, lambda, comp.entropy_bits(), 0.0, max_input_length(comp)};
      d.rate_loss = rate_loss(d.entropy_bits, k, n) + double(v) / double(n);
      return d;
    }
    if (lambda <= 0.0) {
      throw ConfigError("design: no composition of length " + std::to_string(n) + " over " +
                        std::to_string(num_amplitudes) + " amplitudes supports k = " + std::to_string(k));
    }
    lambda = std::max(0.0, lambda - step);
  }
}

}  // namespace paslab
