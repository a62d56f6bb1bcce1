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

// Sweep drivers and CSV emission. Sweep points run on a worker pool; rows
// are stored by sweep index so the output never depends on scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "paslab/harness/config.hpp"
#include "paslab/harness/transmission.hpp"
#include "paslab/lccdm.hpp"
#include "paslab/metrics.hpp"
#include "paslab/parallel.hpp"

namespace paslab::harness {

inline constexpr double kNotSimulated = std::numeric_limits<double>::quiet_NaN();

struct SweepRow {
  Variant variant;
  int n = 0;
  double distance_km = 0.0;
  double rate_4d = 0.0;
  double launch_dbm = kNotSimulated;
  double snr_db = kNotSimulated;
  double air_4d = kNotSimulated;
  double ber = kNotSimulated;
  double mean_edi_db = kNotSimulated;
};

struct BlockRecords {
  Variant variant;
  int n = 0;
  double distance_km = 0.0;
  double launch_dbm = 0.0;
  std::vector<double> snr_db;
  std::vector<double> edi_db;
};

struct SweepOutput {
  SweepAxis axis = SweepAxis::kPower;
  std::vector<SweepRow> rows;
  std::vector<BlockRecords> blocks;
  std::vector<FlipSweepRow> flip_rows;
};

/// Fully specified single-run setup for blocklength n, launch power and span count.
inline TransmissionSetup setup_for(const ExperimentSpec& s, int n, double launch_dbm, int num_spans) {
  TransmissionSetup t;
  t.shaper = s.shaper;
  t.shaper.n = n;
  t.shaper.window = s.window_for(n);
  t.link = s.link;
  t.link.num_spans = num_spans;
  t.wdm = s.wdm;
  t.wdm.launch_power_dbm = launch_dbm;
  t.grid = s.grid;
  t.grid.blocks_per_run = blocks_for(s, n);
  t.seed = *s.seed;
  return t;
}

namespace detail {

struct Point {
  Variant variant;
  int n;
  double launch_dbm;
  int num_spans;
};

inline void log_point(const Point& p, const TransmissionResult& r) {
  std::ostringstream os;
  os << "[paslab] " << p.variant.name() << " n=" << p.n << " spans=" << p.num_spans << " P=" << p.launch_dbm
     << " dBm: snr=" << csv_number(r.snr_db) << " dB air=" << csv_number(r.air_4d) << '\n';
  if (r.phase_warning) {
    os << "[paslab] warning: per-step nonlinear phase " << r.max_nonlinear_phase
       << " rad exceeds the warning bound; consider a smaller step\n";
  }
  std::cerr << os.str();
}

/// Runs all points, `workers` at a time; results indexed like `points`.
inline std::vector<TransmissionResult> run_points(const ExperimentSpec& s, const std::vector<Point>& points,
                                                  int workers) {
  std::vector<TransmissionResult> results(points.size());
  parallel_for(
      points.size(),
      [&](std::size_t i) {
        const auto& p = points[i];
        results[i] = run_transmission(setup_for(s, p.n, p.launch_dbm, p.num_spans), p.variant, 1);
        log_point(p, results[i]);
      },
      workers);
  return results;
}

inline SweepRow row_from(const ExperimentSpec& s, const Point& p, const TransmissionResult& r) {
  ShaperParams sh = s.shaper;
  sh.n = p.n;
  return SweepRow{p.variant, p.n, s.link.span_length_km * p.num_spans, total_rate_4d(p.variant, sh), r.launch_dbm,
                  r.snr_db,  r.air_4d, r.ber, r.mean_edi_db};
}

inline BlockRecords blocks_from(const ExperimentSpec& s, const Point& p, const TransmissionResult& r) {
  return BlockRecords{p.variant, p.n, s.link.span_length_km * p.num_spans, r.launch_dbm, r.block_snr_db,
                      r.block_edi_db};
}

}  // namespace detail

/// One row per launch power per variant, ordered variant-major.
inline SweepOutput run_power_sweep(const ExperimentSpec& s, int workers) {
  std::vector<detail::Point> points;
  for (const auto& v : s.variants()) {
    for (double p : s.sweep.launch_powers_dbm) points.push_back({v, s.shaper.n, p, s.link.num_spans});
  }
  const auto results = detail::run_points(s, points, workers);
  SweepOutput out;
  out.axis = SweepAxis::kPower;
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.rows.push_back(detail::row_from(s, points[i], results[i]));
    out.blocks.push_back(detail::blocks_from(s, points[i], results[i]));
  }
  return out;
}

/// Channel-free mean EDI for every (n, shaped variant); n values listed in
/// simulate_blocklengths are also propagated at each launch power and the
/// point with the highest effective SNR is reported.
inline SweepOutput run_blocklength_sweep(const ExperimentSpec& s, int workers) {
  SweepOutput out;
  out.axis = SweepAxis::kBlocklength;
  std::vector<Variant> shaped;
  for (const auto& v : s.variants()) {
    if (v.kind == Variant::Kind::kShaped) shaped.push_back(v);
  }
  for (int n : s.sweep.blocklengths) {
    const bool simulate = std::find(s.sweep.simulate_blocklengths.begin(), s.sweep.simulate_blocklengths.end(), n) !=
                          s.sweep.simulate_blocklengths.end();
    for (const auto& v : shaped) {
      const auto cfg = lccdm_config_for_rate(s.shaper.num_amplitudes(), s.shaper.shaping_rate, n, v.v,
                                             s.window_for(n), s.shaper.flip);
      SweepRow row;
      row.variant = v;
      row.n = n;
      row.distance_km = s.link.total_length_km();
      ShaperParams sh = s.shaper;
      sh.n = n;
      row.rate_4d = total_rate_4d(v, sh);
      row.mean_edi_db = lccdm_mean_edi_db(cfg, s.sweep.edi_blocks, *s.seed, workers);
      std::cerr << "[paslab] " << v.name() << " n=" << n << ": mean EDI " << csv_number(row.mean_edi_db) << " dB\n";
      if (simulate) {
        std::vector<detail::Point> points;
        for (double p : s.sweep.launch_powers_dbm) points.push_back({v, n, p, s.link.num_spans});
        const auto results = detail::run_points(s, points, workers);
        std::size_t best = 0;
        for (std::size_t i = 1; i < results.size(); ++i) {
          if (results[i].snr_db > results[best].snr_db) best = i;
        }
        row.launch_dbm = results[best].launch_dbm;
        row.snr_db = results[best].snr_db;
        row.air_4d = results[best].air_4d;
        row.ber = results[best].ber;
        out.blocks.push_back(detail::blocks_from(s, points[best], results[best]));
      }
      out.rows.push_back(row);
    }
  }
  return out;
}

/// Mean EDI vs flipping-bit count for prefix and suffix flipping.
inline SweepOutput run_flipping_sweep(const ExperimentSpec& s, int workers) {
  SweepOutput out;
  out.axis = SweepAxis::kFlipping;
  const int n = s.shaper.n;
  out.flip_rows = prefix_suffix_sweep(s.shaper.num_amplitudes(), s.shaper.shaping_rate, n, s.window_for(n),
                                      s.sweep.flipping_bits, s.sweep.edi_blocks, *s.seed, workers);
  return out;
}

/// For each span count and variant, the launch power with the highest AIR.
inline SweepOutput run_distance_sweep(const ExperimentSpec& s, int workers) {
  SweepOutput out;
  out.axis = SweepAxis::kDistance;
  const auto variants = s.variants();
  std::vector<detail::Point> points;
  for (int spans : s.sweep.num_spans) {
    for (const auto& v : variants) {
      for (double p : s.sweep.launch_powers_dbm) points.push_back({v, s.shaper.n, p, spans});
    }
  }
  const auto results = detail::run_points(s, points, workers);
  const std::size_t per = s.sweep.launch_powers_dbm.size();
  for (std::size_t g = 0; g < points.size(); g += per) {
    std::size_t best = g;
    for (std::size_t i = g + 1; i < g + per; ++i) {
      if (results[i].air_4d > results[best].air_4d) best = i;
    }
    out.rows.push_back(detail::row_from(s, points[best], results[best]));
    out.blocks.push_back(detail::blocks_from(s, points[best], results[best]));
  }
  return out;
}

inline SweepOutput run_sweep(const ExperimentSpec& s, int workers) {
  switch (s.sweep.axis) {
    case SweepAxis::kPower: return run_power_sweep(s, workers);
    case SweepAxis::kBlocklength: return run_blocklength_sweep(s, workers);
    case SweepAxis::kFlipping: return run_flipping_sweep(s, workers);
    case SweepAxis::kDistance: return run_distance_sweep(s, workers);
  }
  throw ConfigError("unknown sweep axis");
}

// ---------------------------------------------------------------------------
// CSV

inline std::string sweep_csv(const SweepOutput& out) {
  std::ostringstream os;
  if (out.axis == SweepAxis::kFlipping) {
    os << "v,flip_position,mean_edi_db\n";
    for (const auto& r : out.flip_rows) os << r.v << ',' << to_string(r.flip) << ',' << csv_number(r.mean_edi_db) << '\n';
    return os.str();
  }
  os << "variant,v,n,distance_km,rate_bit4d,launch_dbm,snr_db,air_bit4d,ber,mean_edi_db\n";
  for (const auto& r : out.rows) {
    os << r.variant.name() << ',' << r.variant.v << ',' << r.n << ',' << csv_number(r.distance_km) << ','
       << csv_number(r.rate_4d) << ',' << csv_number(r.launch_dbm) << ',' << csv_number(r.snr_db) << ','
       << csv_number(r.air_4d) << ',' << csv_number(r.ber) << ',' << csv_number(r.mean_edi_db) << '\n';
  }
  return os.str();
}

namespace detail {

inline std::string block_prefix(const BlockRecords& b) {
  return b.variant.name() + ',' + std::to_string(b.variant.v) + ',' + std::to_string(b.n) + ',' +
         csv_number(b.distance_km) + ',' + csv_number(b.launch_dbm) + ',';
}

/// Prepends `prefix` to every line of `body` after its header.
inline void append_prefixed(std::ostringstream& os, const std::string& body, const std::string& prefix) {
  std::istringstream is(body);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) os << prefix << line << '\n';
}

}  // namespace detail

inline std::string blocks_csv(const SweepOutput& out) {
  std::ostringstream os;
  os << "variant,v,n,distance_km,launch_dbm,block_id,edi_db,snr_db\n";
  for (const auto& b : out.blocks) {
    detail::append_prefixed(os, scatter_export(b.snr_db, b.edi_db).blocks_csv, detail::block_prefix(b));
  }
  return os.str();
}

inline std::string blocks_hist_csv(const SweepOutput& out) {
  std::ostringstream os;
  os << "variant,v,n,distance_km,launch_dbm,quantity,bin_low_db,bin_high_db,count\n";
  for (const auto& b : out.blocks) {
    detail::append_prefixed(os, scatter_export(b.snr_db, b.edi_db).histogram_csv, detail::block_prefix(b));
  }
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << text;
}

/// Writes sweep.csv and, when per-block records exist, blocks.csv and
/// blocks_hist.csv. Returns the written paths.
inline std::vector<std::filesystem::path> write_outputs(const SweepOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written{dir / "sweep.csv"};
  write_text(written.back(), sweep_csv(out));
  if (!out.blocks.empty()) {
    written.push_back(dir / "blocks.csv");
    write_text(written.back(), blocks_csv(out));
    written.push_back(dir / "blocks_hist.csv");
    write_text(written.back(), blocks_hist_csv(out));
  }
  return written;
}

}  // namespace paslab::harness
