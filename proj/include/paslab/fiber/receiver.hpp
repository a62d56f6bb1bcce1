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

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "paslab/error.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"
#include "paslab/fiber/rrc.hpp"
#include "paslab/fiber/ssfm.hpp"
#include "paslab/fiber/wdm.hpp"

namespace paslab::fiber {

/// Reported instead of +inf when the residual is exactly zero.
inline constexpr double kSnrCapDb = 99.0;

/// Least-squares scalar fit h = <y, x> / <x, x>.
inline std::complex<double> scalar_channel(std::span<const std::complex<double>> x,
                                           std::span<const std::complex<double>> y) {
  if (x.size() != y.size()) throw ConfigError("scalar_channel: length mismatch");
  std::complex<double> num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    num += y[t] * std::conj(x[t]);
    den += std::norm(x[t]);
  }
  if (!(den > 0.0)) throw DegenerateInput("effective SNR: reference has zero energy");
  return num / den;
}

/// E|h x|^2 / E|y - h x|^2 in dB with the least-squares h.
inline double effective_snr_db(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y) {
  const auto h = scalar_channel(x, y);
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    signal += std::norm(h * x[t]);
    noise += std::norm(y[t] - h * x[t]);
  }
  if (noise == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, linear_to_db(signal / noise));
}

/// effective_snr_db() per consecutive block of `block_length` symbols.
inline std::vector<double> per_block_snr_db(std::span<const std::complex<double>> x,
                                            std::span<const std::complex<double>> y, std::size_t block_length) {
  if (x.size() != y.size()) throw ConfigError("per_block_snr: length mismatch");
  if (block_length == 0 || x.size() % block_length != 0) {
    throw ConfigError("per_block_snr: length is not a multiple of the block length");
  }
  std::vector<double> out;
  for (std::size_t b = 0; b < x.size() / block_length; ++b) {
    out.push_back(effective_snr_db(x.subspan(b * block_length, block_length), y.subspan(b * block_length, block_length)));
  }
  return out;
}

struct ReceivedSignal {
  Field samples;                   // symbol-rate samples after CDC and matched filtering
  std::complex<double> channel{};  // fitted scalar
  Field equalized;                 // samples / channel
};

/// Channel selection, ideal CDC over `link_length_m`, matched RRC
/// filtering, symbol-rate sampling and data-aided scalar equalization
/// against `reference`.
inline ReceivedSignal receiver_front_end(const Field& aggregate, int channel_index, const WdmConfig& wdm,
                                         double beta2, double link_length_m, double sample_rate,
                                         int samples_per_symbol, std::span<const std::complex<double>> reference) {
  if (channel_index < 0 || channel_index >= wdm.num_channels) {
    throw ConfigError("receiver: unknown channel index " + std::to_string(channel_index));
  }
  // Dispersion is compensated on the whole field, then the channel is
  // moved to baseband by rotating the spectrum.
  const Field full = fft(aggregate);
  const std::size_t len = full.size();
  const Field cdc = linear_operator(len, sample_rate, beta2, 0.0, -link_length_m);
  const long bins = offset_bins(channel_offset(channel_index, wdm), len, sample_rate);
  const auto slen = static_cast<long>(len);
  Field spec(len);
  for (std::size_t k = 0; k < len; ++k) {
    const auto src = static_cast<std::size_t>(((static_cast<long>(k) + bins) % slen + slen) % slen);
    spec[k] = full[src] * cdc[src];
  }
  ReceivedSignal out;
  out.samples = matched_filter_circular(std::move(spec), wdm.rrc_rolloff, samples_per_symbol);
  if (out.samples.size() != reference.size()) {
    throw ConfigError("receiver: reference length does not match the received symbol count");
  }
  out.channel = scalar_channel(reference, out.samples);
  out.equalized.resize(out.samples.size());
  for (std::size_t t = 0; t < out.samples.size(); ++t) out.equalized[t] = out.samples[t] / out.channel;
  return out;
}

}  // namespace paslab::fiber
