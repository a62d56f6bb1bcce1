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

// One end-to-end run: PAS transmitters for every WDM channel, multi-span
// propagation with EDFAs, and the receiver/metrics chain for the centre
// channel.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "paslab/ccdm.hpp"
#include "paslab/edi.hpp"
#include "paslab/fiber/edfa.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"
#include "paslab/fiber/receiver.hpp"
#include "paslab/fiber/rrc.hpp"
#include "paslab/fiber/ssfm.hpp"
#include "paslab/fiber/waveform_io.hpp"
#include "paslab/fiber/wdm.hpp"
#include "paslab/lccdm.hpp"
#include "paslab/metrics.hpp"
#include "paslab/parallel.hpp"
#include "paslab/pas.hpp"
#include "paslab/rng.hpp"

namespace paslab::harness {

using fiber::Field;

struct ShaperParams {
  int modulation = 256;  // QAM order
  int n = 1800;
  double shaping_rate = 2.4;
  int window = 100;
  FlipPosition flip = FlipPosition::kPrefix;

  [[nodiscard]] int num_amplitudes() const {
    const int pam = static_cast<int>(std::lround(std::sqrt(double(modulation))));
    return pam / 2;
  }
};

/// A signaling scheme: PAS with (L-)CCDM using v flipping bits, or uniform
/// QAM (whose FEC rate only enters the rate bookkeeping).
struct Variant {
  enum class Kind { kShaped, kUniform };
  Kind kind = Kind::kShaped;
  int v = 0;
  double fec_rate = 0.8;

  [[nodiscard]] std::string name() const {
    if (kind == Kind::kUniform) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "uniform_rc%.4g", fec_rate);
      return buf;
    }
    return v == 0 ? "ccdm" : "lccdm_v" + std::to_string(v);
  }
};

/// Total rate in bit/4D symbol: PAS sends R_s + 1 - m (1 - R_c) bits per
/// real dimension, uniform QAM m R_c.
inline double total_rate_4d(const Variant& variant, const ShaperParams& shaper) {
  const int m = PamLabeling(shaper.num_amplitudes()).bits_per_symbol();
  if (variant.kind == Variant::Kind::kUniform) return 4.0 * m * variant.fec_rate;
  return 4.0 * (shaper.shaping_rate + 1.0 - m * (1.0 - variant.fec_rate));
}

/// Transmitted data of one channel.
struct ChannelSignal {
  Field symbols;                    // normalized, all blocks back to back
  std::vector<int> levels_i;        // signed odd-integer levels
  std::vector<int> levels_q;
  std::vector<std::uint8_t> bits;   // label bits in HardDecisions order
  std::vector<double> block_edi;    // linear, unit-energy normalization
  double scale = 1.0;
  std::vector<double> amplitude_probs;
  double rate_loss = 0.0;
};

inline ChannelSignal generate_channel(const ShaperParams& shaper, const Variant& variant, int blocks,
                                      std::uint64_t seed, int workers = 1) {
  const int n = shaper.n;
  const int num_amp = shaper.num_amplitudes();
  const PamLabeling labeling(num_amp);
  ChannelSignal out;
  out.symbols.resize(static_cast<std::size_t>(n) * blocks);
  out.levels_i.resize(out.symbols.size());
  out.levels_q.resize(out.symbols.size());
  out.block_edi.resize(static_cast<std::size_t>(blocks));

  std::vector<AmplitudeBlock> amp_i(static_cast<std::size_t>(blocks)), amp_q(static_cast<std::size_t>(blocks));
  if (variant.kind == Variant::Kind::kShaped) {
    const auto cfg = lccdm_config_for_rate(num_amp, shaper.shaping_rate, n, variant.v, shaper.window, shaper.flip);
    const Lccdm lccdm(cfg);
    out.scale = normalization_scale(cfg.composition);
    out.amplitude_probs = cfg.composition.probabilities();
    out.rate_loss = lccdm_rate_loss(cfg.composition.entropy_bits(), cfg.k, n, variant.v);
    parallel_for(
        static_cast<std::size_t>(blocks),
        [&](std::size_t b) {
          const auto sel = lccdm.encode(random_info_bits(seed, b, 0, cfg.info_bits()),
                                        random_info_bits(seed, b, 1, cfg.info_bits()));
          amp_i[b] = sel.in_phase;
          amp_q[b] = sel.quadrature;
          out.block_edi[b] = sel.edi.linear;
        },
        workers);
  } else {
    out.amplitude_probs.assign(static_cast<std::size_t>(num_amp), 1.0 / num_amp);
    double second = 0.0;
    for (int a = 0; a < num_amp; ++a) second += double(2 * a + 1) * (2 * a + 1) / num_amp;
    out.scale = 1.0 / std::sqrt(2.0 * second);
    for (int b = 0; b < blocks; ++b) {
      Engine eng = make_engine(seed, {tag(Stream::kUniformAmplitudes), static_cast<std::uint64_t>(b)});
      std::uniform_int_distribution<int> pick(0, num_amp - 1);
      auto& ai = amp_i[static_cast<std::size_t>(b)];
      auto& aq = amp_q[static_cast<std::size_t>(b)];
      ai.resize(static_cast<std::size_t>(n));
      aq.resize(static_cast<std::size_t>(n));
      for (int t = 0; t < n; ++t) {
        ai[static_cast<std::size_t>(t)] = 2 * pick(eng) + 1;
        aq[static_cast<std::size_t>(t)] = 2 * pick(eng) + 1;
      }
    }
  }

  for (int b = 0; b < blocks; ++b) {
    const auto bb = static_cast<std::size_t>(b);
    const auto si = sign_source(seed, bb, 0, static_cast<std::size_t>(n));
    const auto sq = sign_source(seed, bb, 1, static_cast<std::size_t>(n));
    const QamBlock block = frame_qam(amp_i[bb], amp_q[bb], si, sq, out.scale);
    const auto bits = label_bits(amp_i[bb], amp_q[bb], si, sq, labeling);
    out.bits.insert(out.bits.end(), bits.begin(), bits.end());
    for (int t = 0; t < n; ++t) {
      const std::size_t idx = bb * static_cast<std::size_t>(n) + static_cast<std::size_t>(t);
      out.symbols[idx] = block.symbols[static_cast<std::size_t>(t)];
      out.levels_i[idx] = signed_amplitude(amp_i[bb][static_cast<std::size_t>(t)], si[static_cast<std::size_t>(t)]);
      out.levels_q[idx] = signed_amplitude(amp_q[bb][static_cast<std::size_t>(t)], sq[static_cast<std::size_t>(t)]);
    }
    if (variant.kind == Variant::Kind::kUniform) {
      out.block_edi[bb] = edi_estimate(block.symbols, shaper.window).linear;
    }
  }
  return out;
}

struct TransmissionSetup {
  ShaperParams shaper;
  fiber::FiberLink link;
  fiber::WdmConfig wdm;
  fiber::SimGrid grid;
  std::uint64_t seed = 1;
  std::string waveform_dump;  // path prefix; empty disables the dumps
};

struct TransmissionResult {
  double launch_dbm = 0.0;
  double snr_db = 0.0;
  double air_4d = 0.0;
  double ber = 0.0;
  double mean_edi_db = 0.0;
  std::vector<double> block_snr_db;
  std::vector<double> block_edi_db;
  double max_nonlinear_phase = 0.0;
  bool phase_warning = false;
};

/// Per-channel waveform at the aggregate rate with the configured launch power.
inline Field channel_waveform(const ChannelSignal& ch, const TransmissionSetup& s, int aggregate_sps) {
  Field w = fiber::rrc_shape_circular(ch.symbols, s.wdm.rrc_rolloff, s.grid.tx_samples_per_symbol);
  if (aggregate_sps != s.grid.tx_samples_per_symbol) {
    w = fiber::resample_periodic(w, ch.symbols.size() * static_cast<std::size_t>(aggregate_sps));
  }
  const double target = fiber::dbm_to_watt(s.wdm.launch_power_dbm);
  const double gain = std::sqrt(target / fiber::mean_power(w));
  for (auto& v : w) v *= gain;
  return w;
}

inline TransmissionResult run_transmission(const TransmissionSetup& s, const Variant& variant, int workers = 1) {
  const int blocks = s.grid.blocks_per_run;
  const int sps = fiber::aggregate_samples_per_symbol(s.wdm, s.grid);
  const double fs = sps * s.wdm.symbol_rate();
  const int centre = (s.wdm.num_channels - 1) / 2;

  std::vector<ChannelSignal> signals(static_cast<std::size_t>(s.wdm.num_channels));
  std::vector<Field> waveforms(signals.size());
  for (int c = 0; c < s.wdm.num_channels; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    signals[cc] = generate_channel(s.shaper, variant, blocks, derive_seed(s.seed, {100, cc}), workers);
    waveforms[cc] = channel_waveform(signals[cc], s, sps);
    if (c != centre) signals[cc] = ChannelSignal{};
  }
  Field field = fiber::wdm_mux(waveforms, s.wdm, fs);
  waveforms.clear();
  if (!s.waveform_dump.empty()) fiber::write_waveform(s.waveform_dump + "_tx.pwf", field);

  TransmissionResult r;
  r.launch_dbm = s.wdm.launch_power_dbm;
  for (int span = 0; span < s.link.num_spans; ++span) {
    const auto st = fiber::ssfm_span(field, s.link, s.grid, fs);
    r.max_nonlinear_phase = std::max(r.max_nonlinear_phase, st.max_nonlinear_phase);
    r.phase_warning = r.phase_warning || st.phase_warning;
    fiber::edfa(field, s.link.span_gain_db(), s.link.edfa_noise_figure_db, fs, s.link.carrier_frequency(),
                derive_seed(s.seed, {tag(Stream::kAse), static_cast<std::uint64_t>(span)}));
  }

  if (!s.waveform_dump.empty()) fiber::write_waveform(s.waveform_dump + "_rx.pwf", field);

  const ChannelSignal& tx = signals[static_cast<std::size_t>(centre)];
  const auto rx = fiber::receiver_front_end(field, centre, s.wdm, s.link.beta2(), s.link.total_length_km() * 1e3, fs,
                                            sps, tx.symbols);
  r.snr_db = fiber::effective_snr_db(tx.symbols, rx.samples);
  r.block_snr_db = fiber::per_block_snr_db(tx.symbols, rx.samples, static_cast<std::size_t>(s.shaper.n));
  r.block_edi_db.reserve(tx.block_edi.size());
  for (double e : tx.block_edi) r.block_edi_db.push_back(EdiValue::from_linear(e).db);
  r.mean_edi_db = mean_linear_to_db(tx.block_edi);

  // Per-dimension view for the bit metrics.
  const std::size_t count = tx.symbols.size();
  std::vector<int> levels(2 * count);
  std::vector<double> received(2 * count);
  double err = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    levels[2 * t] = tx.levels_i[t];
    levels[2 * t + 1] = tx.levels_q[t];
    received[2 * t] = rx.equalized[t].real();
    received[2 * t + 1] = rx.equalized[t].imag();
    err += std::norm(rx.equalized[t] - tx.symbols[t]);
  }
  const double noise_1d = std::max(err / double(count) / 2.0, 1e-300);
  const PamLabeling labeling(s.shaper.num_amplitudes());
  r.air_4d = air_bmd(levels, received, tx.scale, labeling, tx.amplitude_probs, tx.rate_loss, noise_1d).air_4d;

  const auto decisions = hard_demap(QamBlock{rx.equalized, tx.scale}, labeling);
  r.ber = pre_fec_ber(tx.bits, decisions.bits);
  return r;
}

}  // namespace paslab::harness
