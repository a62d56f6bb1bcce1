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
#include <string>
#include <vector>

#include "paslab/error.hpp"

namespace paslab::fiber {

inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kPi = 3.14159265358979323846;

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

struct FiberLink {
  double span_length_km = 80.0;
  int num_spans = 8;
  double attenuation_db_per_km = 0.2;
  double dispersion_ps_nm_km = 17.0;
  double gamma_per_w_km = 1.37;
  double center_wavelength_nm = 1550.0;
  double edfa_noise_figure_db = 6.0;

  [[nodiscard]] double total_length_km() const { return span_length_km * num_spans; }

  /// beta2 in s^2/m.
  [[nodiscard]] double beta2() const {
    const double lambda = center_wavelength_nm * 1e-9;
    const double d = dispersion_ps_nm_km * 1e-12 / (1e-9 * 1e3);  // s/m^2
    return -d * lambda * lambda / (2.0 * kPi * kSpeedOfLight);
  }

  /// Power attenuation coefficient in 1/m.
  [[nodiscard]] double alpha() const { return attenuation_db_per_km / (10.0 * std::log10(std::exp(1.0))) / 1e3; }

  [[nodiscard]] double gamma() const { return gamma_per_w_km / 1e3; }  // 1/(W m)

  [[nodiscard]] double carrier_frequency() const { return kSpeedOfLight / (center_wavelength_nm * 1e-9); }

  [[nodiscard]] double span_gain_db() const { return attenuation_db_per_km * span_length_km; }

  [[nodiscard]] std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (!(span_length_km > 0)) errors.push_back("fiber.span_length_km must be positive");
    if (num_spans < 1) errors.push_back("fiber.num_spans must be at least 1");
    if (!(attenuation_db_per_km >= 0)) errors.push_back("fiber.attenuation_db_per_km must be non-negative");
    if (!(gamma_per_w_km >= 0)) errors.push_back("fiber.gamma_per_w_km must be non-negative");
    if (!(center_wavelength_nm > 0)) errors.push_back("fiber.center_wavelength_nm must be positive");
    return errors;
  }
};

struct WdmConfig {
  int num_channels = 3;
  double channel_spacing_ghz = 50.0;
  double symbol_rate_gbd = 32.0;
  double rrc_rolloff = 0.1;
  double launch_power_dbm = 0.0;  // per channel

  [[nodiscard]] double symbol_rate() const { return symbol_rate_gbd * 1e9; }
  [[nodiscard]] double spacing() const { return channel_spacing_ghz * 1e9; }

  [[nodiscard]] std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (num_channels < 1 || num_channels % 2 == 0) errors.push_back("wdm.num_channels must be odd and positive");
    if (!(symbol_rate_gbd > 0)) errors.push_back("wdm.symbol_rate_gbd must be positive");
    if (!(rrc_rolloff > 0 && rrc_rolloff <= 1)) errors.push_back("wdm.rrc_rolloff must be in (0, 1]");
    if (num_channels > 1 && channel_spacing_ghz * 1e9 < symbol_rate() * (1 + rrc_rolloff)) {
      errors.push_back("wdm.channel_spacing_ghz is smaller than the channel bandwidth");
    }
    return errors;
  }
};

struct SimGrid {
  int tx_samples_per_symbol = 2;
  double guard = 0.2;
  int blocks_per_run = 12;
  double step_km = 1.0;
  double nl_phase_warn_rad = 0.05;
  double nl_phase_abort_rad = 1.0;
};

/// Aggregate samples per symbol: the smallest power of two whose sample
/// rate covers N_ch * spacing * (1 + guard).
inline int aggregate_samples_per_symbol(const WdmConfig& wdm, const SimGrid& grid) {
  const double needed = wdm.num_channels * std::max(wdm.spacing(), wdm.symbol_rate() * (1 + wdm.rrc_rolloff)) *
                        (1.0 + grid.guard);
  int sps = std::max(grid.tx_samples_per_symbol, 1);
  while (sps * wdm.symbol_rate() < needed) sps *= 2;
  return sps;
}

}  // namespace paslab::fiber
