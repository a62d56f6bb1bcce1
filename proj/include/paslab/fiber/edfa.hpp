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
#include <cstdint>
#include <random>

#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"
#include "paslab/rng.hpp"

namespace paslab::fiber {

/// One-sided ASE power spectral density (W/Hz) in a single polarization:
/// (G - 1) h nu n_sp with n_sp = NF / 2.
inline double ase_psd(double gain_db, double noise_figure_db, double carrier_frequency) {
  const double g = db_to_linear(gain_db);
  const double n_sp = db_to_linear(noise_figure_db) / 2.0;
  return (g - 1.0) * kPlanck * carrier_frequency * n_sp;
}

/// Amplifies by gain_db and adds white circular Gaussian ASE over the
/// whole simulated bandwidth. A noise figure of -inf gives a noiseless
/// amplifier.
inline void edfa(Field& x, double gain_db, double noise_figure_db, double sample_rate, double carrier_frequency,
                 std::uint64_t seed) {
  const double amp = std::sqrt(db_to_linear(gain_db));
  for (auto& v : x) v *= amp;
  const double variance = ase_psd(gain_db, noise_figure_db, carrier_frequency) * sample_rate;
  if (!(variance > 0.0)) return;
  Engine eng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  for (auto& v : x) {
    const double re = normal(eng);
    const double im = normal(eng);
    v += std::complex<double>(re, im);
  }
}

}  // namespace paslab::fiber
