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

// Root-raised-cosine pulse shaping. Two realizations: a truncated FIR
// (linear convolution) and an exact circular one in the DFT domain, the
// latter used by the block-periodic simulator.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "paslab/error.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"

namespace paslab::fiber {

/// Unit-energy RRC taps, `span_symbols` symbols long (centre tap included).
inline std::vector<double> rrc_taps(double rolloff, int samples_per_symbol, int span_symbols = 128) {
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigError("rrc: roll-off must be in (0, 1]");
  if (samples_per_symbol < 1) throw ConfigError("rrc: samples per symbol must be positive");
  const int half = span_symbols * samples_per_symbol / 2;
  std::vector<double> h(static_cast<std::size_t>(2 * half + 1));
  const double b = rolloff;
  for (int i = -half; i <= half; ++i) {
    const double t = double(i) / samples_per_symbol;
    double v;
    if (i == 0) {
      v = 1.0 + b * (4.0 / kPi - 1.0);
    } else if (std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-12) {
      v = b / std::sqrt(2.0) *
          ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) + (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
    } else {
      v = (std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b))) /
          (kPi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t)));
    }
    h[static_cast<std::size_t>(i + half)] = v;
  }
  double e = 0.0;
  for (double v : h) e += v * v;
  const double s = 1.0 / std::sqrt(e);
  for (double& v : h) v *= s;
  return h;
}

/// Upsample by zero insertion and convolve with the RRC taps. The output
/// has n * sps + taps - 1 samples; symbol t peaks at index t * sps + delay
/// with delay = (taps - 1) / 2.
inline Field rrc_shape(const Field& symbols, double rolloff, int samples_per_symbol, int span_symbols = 128) {
  const auto h = rrc_taps(rolloff, samples_per_symbol, span_symbols);
  const std::size_t sps = static_cast<std::size_t>(samples_per_symbol);
  Field out(symbols.size() * sps + h.size() - 1);
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    const std::size_t base = t * sps;
    for (std::size_t k = 0; k < h.size(); ++k) out[base + k] += symbols[t] * h[k];
  }
  return out;
}

/// Matched filter (same taps) followed by symbol-rate sampling of a
/// waveform produced by rrc_shape().
inline Field rrc_matched_downsample(const Field& waveform, std::size_t num_symbols, double rolloff,
                                    int samples_per_symbol, int span_symbols = 128) {
  const auto h = rrc_taps(rolloff, samples_per_symbol, span_symbols);
  const std::size_t sps = static_cast<std::size_t>(samples_per_symbol);
  const std::size_t delay = h.size() - 1;  // transmit + receive filter delay
  Field out(num_symbols);
  for (std::size_t t = 0; t < num_symbols; ++t) {
    const std::size_t centre = t * sps + delay;
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (centre >= k && centre - k < waveform.size()) acc += waveform[centre - k] * h[k];
    }
    out[t] = acc;
  }
  return out;
}

/// RRC amplitude response at frequency f (in units of the symbol rate),
/// peak value 1.
inline double rrc_response(double f, double rolloff) {
  const double af = std::abs(f);
  const double lo = (1.0 - rolloff) / 2.0;
  const double hi = (1.0 + rolloff) / 2.0;
  if (af <= lo) return 1.0;
  if (af > hi) return 0.0;
  return std::sqrt(0.5 * (1.0 + std::cos(kPi / rolloff * (af - lo))));
}

/// Circular RRC shaping of a periodic symbol sequence at `sps` samples per
/// symbol; unit-energy pulse.
inline Field rrc_shape_circular(const Field& symbols, double rolloff, int samples_per_symbol) {
  const std::size_t n = symbols.size();
  const std::size_t sps = static_cast<std::size_t>(samples_per_symbol);
  const std::size_t len = n * sps;
  Field spec = fft(symbols);
  Field out(len);
  const double gain = std::sqrt(double(samples_per_symbol));
  for (std::size_t k = 0; k < len; ++k) {
    const double f = bin_frequency(k, len, double(samples_per_symbol));  // symbol-rate units
    out[k] = spec[k % n] * (gain * rrc_response(f, rolloff));
  }
  return ifft(std::move(out));
}

/// Band-limited resampling of a periodic waveform to `new_size` samples
/// by zero-padding (or truncating) its spectrum.
inline Field resample_periodic(const Field& x, std::size_t new_size) {
  const std::size_t old_size = x.size();
  Field spec = fft(x);
  Field out(new_size);
  const std::size_t keep = std::min(old_size, new_size);
  const std::size_t pos = (keep + 1) / 2;  // non-negative bins, DC included
  const std::size_t neg = keep - pos;
  for (std::size_t k = 0; k < pos; ++k) out[k] = spec[k];
  for (std::size_t k = 1; k <= neg; ++k) out[new_size - k] = spec[old_size - k];
  auto y = ifft(std::move(out));
  const double s = double(new_size) / double(old_size);
  for (auto& v : y) v *= s;
  return y;
}

/// Matched RRC filter on a periodic grid and symbol-rate sampling at
/// indices t * sps. Inverts rrc_shape_circular() exactly on the same grid.
inline Field matched_filter_circular(Field spectrum, double rolloff, int samples_per_symbol) {
  const std::size_t len = spectrum.size();
  const double gain = std::sqrt(double(samples_per_symbol));
  for (std::size_t k = 0; k < len; ++k) {
    const double f = bin_frequency(k, len, double(samples_per_symbol));
    spectrum[k] *= gain * rrc_response(f, rolloff);
  }
  Field w = ifft(std::move(spectrum));
  const std::size_t sps = static_cast<std::size_t>(samples_per_symbol);
  Field out(len / sps);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = w[t * sps];
  return out;
}

}  // namespace paslab::fiber
