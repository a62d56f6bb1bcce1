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

// List-encoding CCDM.
//
// v flipping bits are inserted in front of (prefix) or behind (suffix) the
// k - v information bits of each branch. All 2^v flipping patterns are
// encoded, every in-phase candidate is paired with every quadrature
// candidate to form 2^{2v} sign-free QAM blocks a_I + j a_Q, and the pair
// with the smallest EDI is transmitted. The receiver decodes each branch
// with a plain CCDM and drops the flipping bits.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "paslab/bits.hpp"
#include "paslab/ccdm.hpp"
#include "paslab/composition.hpp"
#include "paslab/edi.hpp"
#include "paslab/error.hpp"
#include "paslab/parallel.hpp"
#include "paslab/rng.hpp"
#include "paslab/shaping.hpp"

namespace paslab {

enum class FlipPosition { kPrefix, kSuffix };

inline std::string to_string(FlipPosition p) { return p == FlipPosition::kPrefix ? "prefix" : "suffix"; }

inline FlipPosition flip_position_from_string(const std::string& s) {
  if (s == "prefix") return FlipPosition::kPrefix;
  if (s == "suffix") return FlipPosition::kSuffix;
  throw ConfigError("flip position must be 'prefix' or 'suffix', got '" + s + "'");
}

struct LccdmConfig {
  Composition composition;
  int k = 0;
  int v = 0;
  int window = 100;
  FlipPosition flip = FlipPosition::kPrefix;

  void validate() const {
    if (v < 0 || v > k) throw ConfigError("L-CCDM: requires 0 <= v <= k");
    if (v > 16) throw ConfigError("L-CCDM: v > 16 flipping bits is not supported");
    if (k > max_input_length(composition)) {
      throw ConfigError("L-CCDM: 2^k exceeds the codebook size of " + composition.to_string());
    }
    detail::check_window(static_cast<std::size_t>(composition.n()), window);
    if (composition.n() - window < 2) throw ConfigError("L-CCDM: n - W must be at least 2");
  }

  [[nodiscard]] int info_bits() const noexcept { return k - v; }
};

/// All 2^v k-bit inputs for one block of information bits, flipping
/// pattern F enumerated 0 .. 2^v - 1 (MSB first).
inline std::vector<BitBlock> candidate_inputs(const BitBlock& info, int v, FlipPosition flip) {
  if (v < 0 || v > 30) throw ConfigError("candidate_inputs: v out of range");
  const std::size_t count = std::size_t{1} << v;
  std::vector<BitBlock> out;
  out.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const BitBlock pattern = BitBlock::from_integer(mpz_class(static_cast<unsigned long>(f)), static_cast<std::size_t>(v));
    out.push_back(flip == FlipPosition::kPrefix ? pattern.concat(info) : info.concat(pattern));
  }
  return out;
}

struct LccdmSelection {
  AmplitudeBlock in_phase;
  AmplitudeBlock quadrature;
  std::size_t index_i = 0;  // 0-based flipping pattern of the in-phase branch
  std::size_t index_j = 0;
  ExactEdi raw_edi;         // on the odd-integer grid
  EdiValue edi;             // after normalizing to unit average symbol energy
};

struct CandidateSet {
  std::vector<AmplitudeBlock> in_phase;
  std::vector<AmplitudeBlock> quadrature;
  /// EDI of x_{i,j}, stored at i * 2^v + j.
  std::vector<ExactEdi> edi;
};

class Lccdm {
 public:
  explicit Lccdm(LccdmConfig cfg) : cfg_(std::move(cfg)), ccdm_((cfg_.validate(), cfg_.composition), cfg_.k) {}

  [[nodiscard]] const LccdmConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const Ccdm& ccdm() const noexcept { return ccdm_; }

  /// Average energy of a QAM symbol built from this composition.
  [[nodiscard]] double symbol_energy() const { return 2.0 * cfg_.composition.second_moment(); }

  /// Encodes every flipping pattern on both branches and measures every
  /// pseudo-QAM pairing. Candidate encoding and EDI evaluation run on up to
  /// `workers` threads.
  [[nodiscard]] CandidateSet candidates(const BitBlock& info_i, const BitBlock& info_q, int workers = 1) const {
    check_info(info_i);
    check_info(info_q);
    const auto inputs_i = candidate_inputs(info_i, cfg_.v, cfg_.flip);
    const auto inputs_q = candidate_inputs(info_q, cfg_.v, cfg_.flip);
    const std::size_t per_branch = inputs_i.size();
    CandidateSet set;
    set.in_phase.resize(per_branch);
    set.quadrature.resize(per_branch);
    parallel_for(
        2 * per_branch,
        [&](std::size_t t) {
          if (t < per_branch) {
            set.in_phase[t] = ccdm_.encode(inputs_i[t]);
          } else {
            set.quadrature[t - per_branch] = ccdm_.encode(inputs_q[t - per_branch]);
          }
        },
        workers);

    const std::size_t n = static_cast<std::size_t>(cfg_.composition.n());
    std::vector<std::vector<std::int64_t>> sq_i(per_branch), sq_q(per_branch);
    for (std::size_t c = 0; c < per_branch; ++c) {
      sq_i[c] = squares(set.in_phase[c]);
      sq_q[c] = squares(set.quadrature[c]);
    }
    set.edi.resize(per_branch * per_branch);
    parallel_for(
        per_branch,
        [&](std::size_t i) {
          std::vector<std::int64_t> energy(n);
          for (std::size_t j = 0; j < per_branch; ++j) {
            for (std::size_t t = 0; t < n; ++t) energy[t] = sq_i[i][t] + sq_q[j][t];
            set.edi[i * per_branch + j] = edi_exact(energy, cfg_.window);
          }
        },
        workers);
    return set;
  }

  /// argmin over the candidate set; ties go to the smallest (i, j).
  [[nodiscard]] LccdmSelection encode(const BitBlock& info_i, const BitBlock& info_q, int workers = 1) const {
    CandidateSet set = candidates(info_i, info_q, workers);
    const std::size_t per_branch = set.in_phase.size();
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < set.edi.size(); ++idx) {
      if (set.edi[idx] < set.edi[best]) best = idx;
    }
    LccdmSelection sel;
    sel.index_i = best / per_branch;
    sel.index_j = best % per_branch;
    sel.in_phase = std::move(set.in_phase[sel.index_i]);
    sel.quadrature = std::move(set.quadrature[sel.index_j]);
    sel.raw_edi = set.edi[best];
    sel.edi = EdiValue::from_linear(sel.raw_edi.linear() / symbol_energy());
    return sel;
  }

  /// Strips the flipping bits from a decoded branch.
  [[nodiscard]] BitBlock decode_branch(const AmplitudeBlock& a) const {
    const BitBlock full = ccdm_.decode(a);
    const auto info = static_cast<std::size_t>(cfg_.info_bits());
    return cfg_.flip == FlipPosition::kPrefix ? full.slice(static_cast<std::size_t>(cfg_.v), info)
                                              : full.slice(0, info);
  }

  [[nodiscard]] std::pair<BitBlock, BitBlock> decode(const AmplitudeBlock& a_i, const AmplitudeBlock& a_q) const {
    return {decode_branch(a_i), decode_branch(a_q)};
  }

 private:
  void check_info(const BitBlock& info) const {
    if (info.size() != static_cast<std::size_t>(cfg_.info_bits())) {
      throw ConfigError("L-CCDM: expected " + std::to_string(cfg_.info_bits()) + " information bits, got " +
                        std::to_string(info.size()));
    }
  }

  static std::vector<std::int64_t> squares(const AmplitudeBlock& a) {
    std::vector<std::int64_t> s(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) s[t] = std::int64_t{a[t]} * a[t];
    return s;
  }

  LccdmConfig cfg_;
  Ccdm ccdm_;
};

/// Uniform random information bits for one block, from its own substream.
inline BitBlock random_info_bits(std::uint64_t seed, std::uint64_t block, std::uint64_t branch, int length) {
  Engine eng = make_engine(seed, {tag(Stream::kInfoBits), block, branch});
  BitBlock b(static_cast<std::size_t>(length));
  std::uint64_t word = 0;
  for (int i = 0; i < length; ++i) {
    if (i % 64 == 0) word = eng();
    b.set(static_cast<std::size_t>(i), (word >> (63 - i % 64)) & 1U);
  }
  return b;
}

/// L-CCDM configuration for a target shaping rate, via rate matching.
inline LccdmConfig lccdm_config_for_rate(int num_amplitudes, double shaping_rate, int n, int v, int window,
                                         FlipPosition flip) {
  const ShapingDesign d = design_shaping(num_amplitudes, shaping_rate, n, v);
  return LccdmConfig{d.composition, d.rate.k, v, window, flip};
}

/// Mean EDI (dB, unit-energy normalization) of `blocks` L-CCDM blocks with
/// random information bits.
inline double lccdm_mean_edi_db(const LccdmConfig& cfg, int blocks, std::uint64_t seed, int workers = 1) {
  const Lccdm shaper(cfg);
  std::vector<double> edi(static_cast<std::size_t>(blocks));
  parallel_for(
      edi.size(),
      [&](std::size_t b) {
        const auto info_i = random_info_bits(seed, b, 0, cfg.info_bits());
        const auto info_q = random_info_bits(seed, b, 1, cfg.info_bits());
        edi[b] = shaper.encode(info_i, info_q).edi.linear;
      },
      workers);
  return mean_linear_to_db(edi);
}

struct FlipSweepRow {
  int v = 0;
  FlipPosition flip = FlipPosition::kPrefix;
  double mean_edi_db = 0.0;
};

/// Mean EDI vs number of flipping bits for both flip positions, at fixed
/// shaping rate. The composition is re-derived for each v.
inline std::vector<FlipSweepRow> prefix_suffix_sweep(int num_amplitudes, double shaping_rate, int n, int window,
                                                     const std::vector<int>& v_values, int blocks,
                                                     std::uint64_t seed, int workers = 1) {
  std::vector<FlipSweepRow> rows;
  for (int v : v_values) {
    for (FlipPosition flip : {FlipPosition::kPrefix, FlipPosition::kSuffix}) {
      const auto cfg = lccdm_config_for_rate(num_amplitudes, shaping_rate, n, v, window, flip);
      rows.push_back({v, flip, lccdm_mean_edi_db(cfg, blocks, seed, workers)});
    }
  }
  return rows;
}

}  // namespace paslab
