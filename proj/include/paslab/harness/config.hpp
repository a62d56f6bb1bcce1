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

// Experiment description: one JSON document with sections mirroring the
// physical-layer table (fiber, wdm, grid), the shaper/rate parameters and
// the sweep axis. Values can be overridden with dotted `key=value` pairs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paslab/ccdm.hpp"
#include "paslab/error.hpp"
#include "paslab/fiber/link.hpp"
#include "paslab/harness/transmission.hpp"
#include "paslab/lccdm.hpp"
#include "paslab/shaping.hpp"

namespace paslab::harness {

using nlohmann::json;

enum class SweepAxis { kPower, kBlocklength, kFlipping, kDistance };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kPower: return "power";
    case SweepAxis::kBlocklength: return "blocklength";
    case SweepAxis::kFlipping: return "flipping";
    case SweepAxis::kDistance: return "distance";
  }
  return "?";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "power") return SweepAxis::kPower;
  if (s == "blocklength") return SweepAxis::kBlocklength;
  if (s == "flipping") return SweepAxis::kFlipping;
  if (s == "distance") return SweepAxis::kDistance;
  throw ConfigError("sweep.axis must be power, blocklength, flipping or distance; got '" + s + "'");
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::kPower;
  std::vector<double> launch_powers_dbm{-3.0};
  std::vector<int> blocklengths;           // blocklength axis
  std::vector<int> simulate_blocklengths;  // subset that is also propagated
  std::vector<int> flipping_bits;          // flipping axis
  std::vector<int> num_spans;              // distance axis
  int edi_blocks = 1000;                   // channel-free EDI sample count
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::optional<std::uint64_t> seed;
  ShaperParams shaper;
  std::optional<int> window;       // default_window(n) when absent
  std::vector<int> variants_v{0};  // flipping-bit counts of the shaped variants
  double pas_fec_rate = 0.8;
  std::vector<double> uniform_fec_rates;
  fiber::FiberLink link;
  fiber::WdmConfig wdm;
  fiber::SimGrid grid;
  int min_symbols_per_channel = 20000;
  int blocks_per_run = 0;  // 0: derived from min_symbols_per_channel
  SweepSpec sweep;
  std::string output_dir = "out";

  [[nodiscard]] int window_for(int n) const { return window.value_or(default_window(n)); }

  [[nodiscard]] std::vector<Variant> variants() const {
    std::vector<Variant> out;
    for (int v : variants_v) out.push_back({Variant::Kind::kShaped, v, pas_fec_rate});
    for (double rc : uniform_fec_rates) out.push_back({Variant::Kind::kUniform, 0, rc});
    return out;
  }
};

// ---------------------------------------------------------------------------
// JSON mapping

namespace detail {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

inline const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return doc.at(key);
}

}  // namespace detail

inline ExperimentSpec spec_from_json(const json& doc) {
  using detail::read;
  ExperimentSpec s;
  try {
    read(doc, "name", s.name);
    if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
    read(doc, "output_dir", s.output_dir);

    const json& sh = detail::section(doc, "shaper");
    read(sh, "modulation", s.shaper.modulation);
    read(sh, "n", s.shaper.n);
    read(sh, "shaping_rate", s.shaper.shaping_rate);
    if (sh.contains("window") && !sh.at("window").is_null()) s.window = sh.at("window").get<int>();
    if (sh.contains("flip_position")) s.shaper.flip = flip_position_from_string(sh.at("flip_position").get<std::string>());
    read(sh, "flipping_bits", s.variants_v);
    read(sh, "fec_rate", s.pas_fec_rate);
    read(sh, "uniform_fec_rates", s.uniform_fec_rates);

    const json& fb = detail::section(doc, "fiber");
    read(fb, "span_length_km", s.link.span_length_km);
    read(fb, "num_spans", s.link.num_spans);
    read(fb, "attenuation_db_per_km", s.link.attenuation_db_per_km);
    read(fb, "dispersion_ps_nm_km", s.link.dispersion_ps_nm_km);
    read(fb, "gamma_per_w_km", s.link.gamma_per_w_km);
    read(fb, "center_wavelength_nm", s.link.center_wavelength_nm);
    read(fb, "edfa_noise_figure_db", s.link.edfa_noise_figure_db);

    const json& w = detail::section(doc, "wdm");
    read(w, "num_channels", s.wdm.num_channels);
    read(w, "channel_spacing_ghz", s.wdm.channel_spacing_ghz);
    read(w, "symbol_rate_gbd", s.wdm.symbol_rate_gbd);
    read(w, "rrc_rolloff", s.wdm.rrc_rolloff);
    read(w, "launch_power_dbm", s.wdm.launch_power_dbm);

    const json& g = detail::section(doc, "grid");
    read(g, "tx_samples_per_symbol", s.grid.tx_samples_per_symbol);
    read(g, "guard", s.grid.guard);
    read(g, "step_km", s.grid.step_km);
    read(g, "nl_phase_warn_rad", s.grid.nl_phase_warn_rad);
    read(g, "nl_phase_abort_rad", s.grid.nl_phase_abort_rad);
    read(g, "min_symbols_per_channel", s.min_symbols_per_channel);
    read(g, "blocks_per_run", s.blocks_per_run);

    const json& sw = detail::section(doc, "sweep");
    if (sw.contains("axis")) s.sweep.axis = sweep_axis_from_string(sw.at("axis").get<std::string>());
    read(sw, "launch_powers_dbm", s.sweep.launch_powers_dbm);
    read(sw, "blocklengths", s.sweep.blocklengths);
    read(sw, "simulate_blocklengths", s.sweep.simulate_blocklengths);
    read(sw, "flipping_bits", s.sweep.flipping_bits);
    read(sw, "num_spans", s.sweep.num_spans);
    read(sw, "edi_blocks", s.sweep.edi_blocks);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return s;
}

/// Applies `a.b.c=value`; value is parsed as JSON when possible, otherwise
/// taken as a string.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (!node->is_object()) throw ConfigError("override '" + assignment + "': '" + key + "' is not inside a section");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

inline json load_config_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json doc = json::parse(is, nullptr, false, true);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError(path + " is not a JSON object");
  return doc;
}

// ---------------------------------------------------------------------------
// Validation

struct ConfigIssue {
  std::string field;
  std::string message;
};

inline json issues_to_json(const std::vector<ConfigIssue>& issues) {
  json arr = json::array();
  for (const auto& i : issues) arr.push_back({{"field", i.field}, {"message", i.message}});
  return {{"valid", issues.empty()}, {"errors", arr}};
}

/// Blocks per run for blocklength n: at least min_symbols_per_channel
/// symbols, and a symbol count that puts every channel offset on a DFT bin.
inline int blocks_for(const ExperimentSpec& s, int n) {
  if (s.blocks_per_run > 0) return s.blocks_per_run;
  const int start = std::max(1, (s.min_symbols_per_channel + n - 1) / n);
  const double ratio = s.wdm.spacing() / s.wdm.symbol_rate();
  for (int b = start; b < start + 4096; ++b) {
    const double bins = ratio * double(n) * b;
    if (std::abs(bins - std::round(bins)) < 1e-6) return b;
  }
  return start;
}

inline std::vector<int> blocklengths_in_use(const ExperimentSpec& s) {
  std::vector<int> ns{s.shaper.n};
  if (s.sweep.axis == SweepAxis::kBlocklength) ns = s.sweep.blocklengths;
  return ns;
}

/// Blocklengths that are propagated through the link.
inline std::vector<int> simulated_blocklengths(const ExperimentSpec& s) {
  std::vector<int> ns{s.shaper.n};
  if (s.sweep.axis == SweepAxis::kBlocklength) ns = s.sweep.simulate_blocklengths;
  return ns;
}

inline std::vector<int> flipping_bits_in_use(const ExperimentSpec& s) {
  std::vector<int> vs = s.variants_v;
  if (s.sweep.axis == SweepAxis::kFlipping) vs = s.sweep.flipping_bits;
  return vs;
}

inline std::vector<ConfigIssue> validate_config(const ExperimentSpec& s) {
  std::vector<ConfigIssue> issues;
  auto add = [&](std::string f, std::string m) { issues.push_back({std::move(f), std::move(m)}); };

  if (!s.seed) add("seed", "a master seed is mandatory");
  const int pam = static_cast<int>(std::lround(std::sqrt(double(s.shaper.modulation))));
  if (pam * pam != s.shaper.modulation || pam < 2 || (pam & (pam - 1)) != 0) {
    add("shaper.modulation", "must be a square QAM order with power-of-two PAM (16, 64, 256, ...)");
    return issues;
  }
  if (!(s.shaper.shaping_rate > 0)) add("shaper.shaping_rate", "must be positive");
  if (s.pas_fec_rate <= 0 || s.pas_fec_rate > 1) add("shaper.fec_rate", "must be in (0, 1]");
  for (double rc : s.uniform_fec_rates) {
    if (rc <= 0 || rc > 1) add("shaper.uniform_fec_rates", "entries must be in (0, 1]");
  }
  if (s.sweep.axis == SweepAxis::kBlocklength && s.sweep.blocklengths.empty()) {
    add("sweep.blocklengths", "blocklength sweep needs at least one n");
  }
  if (s.sweep.axis == SweepAxis::kFlipping && s.sweep.flipping_bits.empty()) {
    add("sweep.flipping_bits", "flipping sweep needs at least one v");
  }
  if (s.sweep.axis == SweepAxis::kDistance && s.sweep.num_spans.empty()) {
    add("sweep.num_spans", "distance sweep needs at least one span count");
  }
  if (s.sweep.axis != SweepAxis::kFlipping && s.sweep.launch_powers_dbm.empty()) {
    add("sweep.launch_powers_dbm", "at least one launch power is required");
  }
  for (int n : s.sweep.simulate_blocklengths) {
    if (std::find(s.sweep.blocklengths.begin(), s.sweep.blocklengths.end(), n) == s.sweep.blocklengths.end()) {
      add("sweep.simulate_blocklengths", "n=" + std::to_string(n) + " is not in sweep.blocklengths");
    }
  }
  if (s.sweep.edi_blocks < 1) add("sweep.edi_blocks", "must be positive");

  const int num_amp = pam / 2;
  for (int n : blocklengths_in_use(s)) {
    const std::string where = "n=" + std::to_string(n);
    if (n < 2) {
      add("shaper.n", where + ": blocklength too small");
      continue;
    }
    const int w = s.window_for(n);
    if (w <= 0 || w % 2 != 0) add("shaper.window", where + ": window must be positive and even");
    if (w >= n) add("shaper.window", where + ": window W=" + std::to_string(w) + " must be smaller than n");
    else if (n - w < 2) add("shaper.window", where + ": n - W must be at least 2");
    const double nk = n * s.shaper.shaping_rate;
    if (std::abs(nk - std::round(nk)) > 1e-6) {
      add("shaper.shaping_rate", where + ": n * R_s = " + std::to_string(nk) +
                                     " is not an integer, so k = n R_s + v cannot be formed");
      continue;
    }
    for (int v : flipping_bits_in_use(s)) {
      const std::string wv = where + ", v=" + std::to_string(v);
      if (v < 0 || v > 16) {
        add("shaper.flipping_bits", wv + ": v must lie in [0, 16]");
        continue;
      }
      const int k = static_cast<int>(std::lround(nk)) + v;
      if (v >= k) {
        add("shaper.flipping_bits", wv + ": v must be smaller than k");
        continue;
      }
      try {
        const auto d = design_shaping(num_amp, s.shaper.shaping_rate, n, v);
        if (d.max_input_length < k) add("shaper", wv + ": 2^k exceeds the codebook size");
      } catch (const ConfigError& e) {
        add("shaper", wv + ": " + e.what());
      }
    }
  }

  for (const auto& e : s.link.validate()) add("fiber", e);
  for (const auto& e : s.wdm.validate()) add("wdm", e);
  if (!(s.grid.step_km > 0)) add("grid.step_km", "must be positive");
  if (s.grid.tx_samples_per_symbol < 2) add("grid.tx_samples_per_symbol", "must be at least 2");
  if (s.grid.guard < 0) add("grid.guard", "must be non-negative");
  if (s.min_symbols_per_channel < 1 && s.blocks_per_run < 1) add("grid.min_symbols_per_channel", "must be positive");
  if (issues.empty()) {
    const int sps = fiber::aggregate_samples_per_symbol(s.wdm, s.grid);
    const double fs = sps * s.wdm.symbol_rate();
    const double edge = (s.wdm.num_channels - 1) / 2.0 * s.wdm.spacing() +
                        s.wdm.symbol_rate() * (1 + s.wdm.rrc_rolloff) / 2;
    if (edge * 2 * (1 + s.grid.guard) > fs * (1 + 1e-9) && edge > fs / 2) {
      add("grid", "aggregate grid does not cover the WDM band");
    }
    if (s.sweep.axis != SweepAxis::kFlipping) {
      for (int n : simulated_blocklengths(s)) {
        const int b = blocks_for(s, n);
        const double bins = s.wdm.spacing() / s.wdm.symbol_rate() * double(n) * b;
        if (std::abs(bins - std::round(bins)) > 1e-6) {
          add("grid.blocks_per_run", "n=" + std::to_string(n) + ": channel spacing does not fall on a DFT bin with " +
                                         std::to_string(b) + " blocks");
        }
      }
    }
  }
  return issues;
}

/// Parses and validates, throwing ConfigError listing every issue.
inline ExperimentSpec load_spec(const json& doc) {
  ExperimentSpec s = spec_from_json(doc);
  const auto issues = validate_config(s);
  if (!issues.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& i : issues) msg += "\n  " + i.field + ": " + i.message;
    throw ConfigError(msg);
  }
  return s;
}

}  // namespace paslab::harness
