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
#include <string>
#include <vector>

#include "paslab/error.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"

namespace paslab::fiber {

/// Frequency offset of channel `index` (0-based, centre channel at 0).
inline double channel_offset(int index, const WdmConfig& wdm) {
  return (index - (wdm.num_channels - 1) / 2) * wdm.spacing();
}

/// Number of DFT bins corresponding to `offset`; throws unless integral.
inline long offset_bins(double offset, std::size_t size, double sample_rate) {
  const double bins = offset * double(size) / sample_rate;
  const double r = std::round(bins);
  if (std::abs(bins - r) > 1e-6) {
    throw ConfigError("channel offset " + std::to_string(offset) + " Hz does not fall on a DFT bin of the " +
                      std::to_string(size) + "-sample grid");
  }
  return static_cast<long>(r);
}

/// Multiplies by exp(2 pi i bins t / L), a circular frequency shift.
inline void frequency_shift(Field& x, long bins) {
  if (bins == 0) return;
  const auto len = static_cast<long>(x.size());
  for (long t = 0; t < len; ++t) {
    const long phase_index = ((bins * t) % len + len) % len;
    const double ph = 2.0 * kPi * double(phase_index) / double(len);
    x[static_cast<std::size_t>(t)] *= std::complex<double>(std::cos(ph), std::sin(ph));
  }
}

/// Sum of the channels, channel m shifted to its offset in the WDM comb.
inline Field wdm_mux(const std::vector<Field>& channels, const WdmConfig& wdm, double sample_rate) {
  if (channels.size() != static_cast<std::size_t>(wdm.num_channels)) {
    throw ConfigError("wdm_mux: expected " + std::to_string(wdm.num_channels) + " channel waveforms");
  }
  const std::size_t len = channels.front().size();
  const double edge = (wdm.num_channels - 1) / 2.0 * wdm.spacing() + wdm.symbol_rate() * (1 + wdm.rrc_rolloff) / 2;
  if (edge > sample_rate / 2) {
    throw ConfigError("wdm_mux: simulation grid (" + std::to_string(sample_rate / 1e9) +
                      " GHz) too narrow for the WDM band");
  }
  Field out(len);
  for (int m = 0; m < wdm.num_channels; ++m) {
    const Field& ch = channels[static_cast<std::size_t>(m)];
    if (ch.size() != len) throw ConfigError("wdm_mux: channels differ in length");
    Field shifted = ch;
    frequency_shift(shifted, offset_bins(channel_offset(m, wdm), len, sample_rate));
    for (std::size_t t = 0; t < len; ++t) out[t] += shifted[t];
  }
  return out;
}

}  // namespace paslab::fiber
