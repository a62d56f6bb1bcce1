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

// PAS symbol assembly with the 1D mapping: each QAM symbol is
// (s_I a_I) + j (s_Q a_Q), sign bit 0 -> +1 and 1 -> -1.
//
// 2^m-PAM labeling: bit B_1 (MSB) is the sign bit, bits B_2..B_m are the
// binary reflected Gray code of the amplitude index (a = 2 idx + 1). For
// 16-PAM:
//
//   level  -15  -13  -11   -9   -7   -5   -3   -1    1    3    5    7    9   11   13   15
//   label 1100 1101 1111 1110 1010 1011 1001 1000 0000 0001 0011 0010 0110 0111 0101 0100

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "paslab/bits.hpp"
#include "paslab/composition.hpp"
#include "paslab/error.hpp"
#include "paslab/rng.hpp"

namespace paslab {

inline unsigned gray_encode(unsigned x) noexcept { return x ^ (x >> 1); }

inline unsigned gray_decode(unsigned g) noexcept {
  unsigned x = g;
  for (unsigned shift = 1; shift < 32; shift <<= 1) x ^= x >> shift;
  return x;
}

class PamLabeling {
 public:
  /// Labeling for a PAM constellation with `num_amplitudes` positive levels.
  explicit PamLabeling(int num_amplitudes) : num_amplitudes_(num_amplitudes) {
    if (num_amplitudes < 1 || (num_amplitudes & (num_amplitudes - 1)) != 0) {
      throw ConfigError("PamLabeling: number of amplitudes must be a power of two");
    }
    bits_ = 1;
    while ((1 << (bits_ - 1)) < num_amplitudes) ++bits_;
  }

  [[nodiscard]] int bits_per_symbol() const noexcept { return bits_; }
  [[nodiscard]] int num_amplitudes() const noexcept { return num_amplitudes_; }
  [[nodiscard]] int num_levels() const noexcept { return 2 * num_amplitudes_; }

  /// Label of the signed odd-integer level `x`.
  [[nodiscard]] unsigned label(int x) const {
    const int a = std::abs(x);
    if (a % 2 != 1 || a > 2 * num_amplitudes_ - 1) {
      throw ConfigError("PamLabeling: " + std::to_string(x) + " is not a constellation level");
    }
    const unsigned sign = x < 0 ? 1U : 0U;
    return (sign << (bits_ - 1)) | gray_encode(static_cast<unsigned>((a - 1) / 2));
  }

  [[nodiscard]] int level(unsigned label) const {
    const unsigned amp_mask = (1U << (bits_ - 1)) - 1U;
    const int a = 2 * static_cast<int>(gray_decode(label & amp_mask)) + 1;
    return (label >> (bits_ - 1)) & 1U ? -a : a;
  }

  /// Signed levels in ascending order.
  [[nodiscard]] std::vector<int> levels() const {
    std::vector<int> out;
    for (int a = 2 * num_amplitudes_ - 1; a >= 1; a -= 2) out.push_back(-a);
    for (int a = 1; a <= 2 * num_amplitudes_ - 1; a += 2) out.push_back(a);
    return out;
  }

  /// Bit i (0 = MSB = B_1) of the label of level x.
  [[nodiscard]] int bit(int x, int i) const { return static_cast<int>((label(x) >> (bits_ - 1 - i)) & 1U); }

 private:
  int num_amplitudes_;
  int bits_;
};

struct QamBlock {
  std::vector<std::complex<double>> symbols;
  /// Factor applied to the odd-integer grid.
  double scale = 1.0;
};

/// 1 / sqrt(E|X|^2) for QAM symbols drawn with this composition on both axes.
inline double normalization_scale(const Composition& c) { return 1.0 / std::sqrt(2.0 * c.second_moment()); }

inline int signed_amplitude(int amplitude, std::uint8_t sign_bit) noexcept {
  return sign_bit ? -amplitude : amplitude;
}

inline QamBlock frame_qam(const AmplitudeBlock& a_i, const AmplitudeBlock& a_q, const BitBlock& signs_i,
                          const BitBlock& signs_q, double scale) {
  const std::size_t n = a_i.size();
  if (a_q.size() != n || signs_i.size() != n || signs_q.size() != n) {
    throw ConfigError("frame_qam: amplitude and sign blocks must share one length");
  }
  QamBlock out;
  out.scale = scale;
  out.symbols.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.symbols[t] = {scale * signed_amplitude(a_i[t], signs_i[t]), scale * signed_amplitude(a_q[t], signs_q[t])};
  }
  return out;
}

/// Uniform pseudorandom bits of one block. Bits are taken MSB first from
/// successive 64-bit outputs of the (seed, block, branch) substream.
inline BitBlock sign_source(std::uint64_t seed, std::uint64_t block, std::uint64_t branch, std::size_t count) {
  Engine eng = make_engine(seed, {tag(Stream::kSignBits), block, branch});
  BitBlock b(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = eng();
    b.set(i, (word >> (63 - i % 64)) & 1U);
  }
  return b;
}

struct HardDecisions {
  AmplitudeBlock amplitudes_i;
  AmplitudeBlock amplitudes_q;
  BitBlock signs_i;
  BitBlock signs_q;
  /// Per symbol: the m label bits of I followed by the m label bits of Q.
  std::vector<std::uint8_t> bits;
};

/// Nearest odd integer in [-(2M-1), 2M-1]; boundaries sit at even integers.
inline int nearest_level(double u, int num_amplitudes) noexcept {
  const int max_level = 2 * num_amplitudes - 1;
  int l = 2 * static_cast<int>(std::floor(u / 2.0)) + 1;
  if (l > max_level) l = max_level;
  if (l < -max_level) l = -max_level;
  return l;
}

/// Appends the m label bits of level x.
inline void append_label_bits(std::vector<std::uint8_t>& out, int x, const PamLabeling& lab) {
  for (int i = 0; i < lab.bits_per_symbol(); ++i) out.push_back(static_cast<std::uint8_t>(lab.bit(x, i)));
}

/// Bit stream of a transmitted block in the HardDecisions::bits order.
inline std::vector<std::uint8_t> label_bits(const AmplitudeBlock& a_i, const AmplitudeBlock& a_q,
                                            const BitBlock& s_i, const BitBlock& s_q, const PamLabeling& lab) {
  std::vector<std::uint8_t> out;
  out.reserve(a_i.size() * 2 * static_cast<std::size_t>(lab.bits_per_symbol()));
  for (std::size_t t = 0; t < a_i.size(); ++t) {
    append_label_bits(out, signed_amplitude(a_i[t], s_i[t]), lab);
    append_label_bits(out, signed_amplitude(a_q[t], s_q[t]), lab);
  }
  return out;
}

/// Minimum-distance decisions per real dimension on the normalized grid.
inline HardDecisions hard_demap(const QamBlock& y, const PamLabeling& lab) {
  const std::size_t n = y.symbols.size();
  HardDecisions d;
  d.amplitudes_i.resize(n);
  d.amplitudes_q.resize(n);
  d.signs_i = BitBlock(n);
  d.signs_q = BitBlock(n);
  d.bits.reserve(n * 2 * static_cast<std::size_t>(lab.bits_per_symbol()));
  for (std::size_t t = 0; t < n; ++t) {
    const int li = nearest_level(y.symbols[t].real() / y.scale, lab.num_amplitudes());
    const int lq = nearest_level(y.symbols[t].imag() / y.scale, lab.num_amplitudes());
    d.amplitudes_i[t] = std::abs(li);
    d.amplitudes_q[t] = std::abs(lq);
    d.signs_i.set(t, li < 0);
    d.signs_q.set(t, lq < 0);
    append_label_bits(d.bits, li, lab);
    append_label_bits(d.bits, lq, lab);
  }
  return d;
}

}  // namespace paslab
