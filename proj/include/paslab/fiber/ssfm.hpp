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

// Symmetric split-step Fourier solution of the scalar NLSE
//
//   dA/dz = -(alpha/2) A - i (beta2/2) d^2A/dt^2 + i gamma |A|^2 A
//
// on a periodic time grid. Each step is half a linear step, a full
// nonlinear phase rotation, and another half linear step; consecutive
// linear halves are merged.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "paslab/error.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"

namespace paslab::fiber {

/// exp(i beta2/2 w^2 z - alpha/2 z) per DFT bin, w = 2 pi f.
inline Field linear_operator(std::size_t size, double sample_rate, double beta2, double alpha, double length_m) {
  Field op(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double w = 2.0 * kPi * bin_frequency(k, size, sample_rate);
    const double phase = 0.5 * beta2 * w * w * length_m;
    op[k] = std::exp(-0.5 * alpha * length_m) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return op;
}

/// Lossless dispersion over `length_m`; a negative length undoes it.
inline void apply_dispersion(Field& x, double sample_rate, double beta2, double length_m) {
  Field spec = fft(std::move(x));
  const Field op = linear_operator(spec.size(), sample_rate, beta2, 0.0, length_m);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= op[k];
  x = ifft(std::move(spec));
}

struct SsfmStats {
  int steps = 0;
  double max_nonlinear_phase = 0.0;  // rad, largest gamma |A|^2 h over the span
  bool phase_warning = false;
};

/// Propagates one span of fiber.
inline SsfmStats ssfm_span(Field& x, const FiberLink& link, const SimGrid& grid, double sample_rate) {
  if (!(grid.step_km > 0)) throw ConfigError("ssfm: step size must be positive");
  const double span = link.span_length_km * 1e3;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / (grid.step_km * 1e3) - 1e-9)));
  const double h = span / steps;
  const double beta2 = link.beta2();
  const double alpha = link.alpha();
  const double gamma = link.gamma();
  const std::size_t len = x.size();
  const FftPlan& plan = fft_plan(len);

  const Field half = linear_operator(len, sample_rate, beta2, alpha, 0.5 * h);
  const Field full = linear_operator(len, sample_rate, beta2, alpha, h);

  SsfmStats stats;
  stats.steps = steps;
  plan.forward(x);
  for (std::size_t k = 0; k < len; ++k) x[k] *= half[k];
  for (int s = 0; s < steps; ++s) {
    plan.inverse(x);
    double peak = 0.0;
    if (gamma != 0.0) {
      for (auto& v : x) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        const double phi = gamma * p * h;
        v *= std::complex<double>(std::cos(phi), std::sin(phi));
      }
    } else {
      for (const auto& v : x) peak = std::max(peak, std::norm(v));
    }
    if (!std::isfinite(peak)) throw NumericalInstability("ssfm: field became non-finite");
    const double phase = gamma * peak * h;
    stats.max_nonlinear_phase = std::max(stats.max_nonlinear_phase, phase);
    if (phase > grid.nl_phase_abort_rad) {
      throw NumericalInstability("ssfm: nonlinear phase per step " + std::to_string(phase) +
                                 " rad exceeds the abort bound; reduce the step size");
    }
    plan.forward(x);
    const Field& op = s + 1 == steps ? half : full;
    for (std::size_t k = 0; k < len; ++k) x[k] *= op[k];
  }
  plan.inverse(x);
  stats.phase_warning = stats.max_nonlinear_phase > grid.nl_phase_warn_rad;
  return stats;
}

}  // namespace paslab::fiber
