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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "paslab/error.hpp"
#include "paslab/pas.hpp"
#include "paslab/rng.hpp"

namespace paslab {

/// Largest magnitude of a per-bit log2 metric.
inline constexpr double kMetricClipBits = 50.0;

struct AirResult {
  double air_4d = 0.0;  // bit / 4D symbol
  double entropy_1d = 0.0;
  std::vector<double> conditional_entropies;  // H(B_i | Y), i = 1..m
};

/// Finite-blocklength BMD rate
///   AIR_n = 4 [H(X) - sum_i H(B_i | Y)] - 4 R_L
/// with H(B_i|Y) estimated by Monte-Carlo averaging of the Gaussian
/// auxiliary-channel bit posteriors. `tx_levels` are signed odd-integer PAM
/// levels, `rx` the equalized received values on the normalized grid
/// (level * scale), `amplitude_probs` the prior of each positive amplitude
/// (signs uniform) and `noise_variance` the real per-dimension variance.
inline AirResult air_bmd(std::span<const int> tx_levels, std::span<const double> rx, double scale,
                         const PamLabeling& labeling, std::span<const double> amplitude_probs, double rate_loss,
                         double noise_variance) {
  if (tx_levels.empty()) throw DegenerateInput("air_bmd: empty input");
  if (tx_levels.size() != rx.size()) throw ConfigError("air_bmd: length mismatch");
  if (!(noise_variance > 0.0)) throw ConfigError("air_bmd: noise variance must be positive");
  if (amplitude_probs.size() != static_cast<std::size_t>(labeling.num_amplitudes())) {
    throw ConfigError("air_bmd: prior size does not match the labeling");
  }
  const int m = labeling.bits_per_symbol();
  const auto levels = labeling.levels();
  const std::size_t q = levels.size();
  std::vector<double> log_prior(q);
  std::vector<double> point(q);
  std::vector<unsigned> labels(q);
  double h_amp = 0.0;
  for (double p : amplitude_probs) {
    if (p > 0.0) h_amp -= p * std::log2(p);
  }
  for (std::size_t j = 0; j < q; ++j) {
    const double p = amplitude_probs[static_cast<std::size_t>((std::abs(levels[j]) - 1) / 2)] / 2.0;
    log_prior[j] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    point[j] = scale * levels[j];
    labels[j] = labeling.label(levels[j]);
  }

  const double inv_two_var = 1.0 / (2.0 * noise_variance);
  std::vector<double> metric(q);
  std::vector<double> sums(static_cast<std::size_t>(m), 0.0);
  auto lse = [&](auto&& include) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q; ++j) {
      if (include(j)) peak = std::max(peak, metric[j]);
    }
    if (!std::isfinite(peak)) return peak;
    double s = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      if (include(j)) s += std::exp(metric[j] - peak);
    }
    return peak + std::log(s);
  };

  for (std::size_t t = 0; t < tx_levels.size(); ++t) {
    for (std::size_t j = 0; j < q; ++j) {
      const double d = rx[t] - point[j];
      metric[j] = log_prior[j] - d * d * inv_two_var;
    }
    const double all = lse([](std::size_t) { return true; });
    const unsigned tx_label = labeling.label(tx_levels[t]);
    for (int i = 0; i < m; ++i) {
      const unsigned mask = 1U << (m - 1 - i);
      const unsigned want = tx_label & mask;
      const double part = lse([&](std::size_t j) { return (labels[j] & mask) == want; });
      double bits = (all - part) / std::log(2.0);
      if (!std::isfinite(bits) || bits > kMetricClipBits) bits = kMetricClipBits;
      sums[static_cast<std::size_t>(i)] += bits;
    }
  }

  AirResult r;
  r.entropy_1d = h_amp + 1.0;
  double cond = 0.0;
  for (double s : sums) {
    r.conditional_entropies.push_back(s / double(tx_levels.size()));
    cond += r.conditional_entropies.back();
  }
  r.air_4d = 4.0 * (r.entropy_1d - cond) - 4.0 * rate_loss;
  return r;
}

/// Hamming distance / length.
inline double pre_fec_ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
  if (tx.size() != rx.size()) throw ConfigError("pre_fec_ber: length mismatch");
  if (tx.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) errors += (tx[i] != rx[i]) ? 1U : 0U;
  return double(errors) / double(tx.size());
}

/// Ranks with ties averaged, 1-based.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ConfigError("correlation: need two equal-length samples");
  const double n = double(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(std::span<const double> a, std::span<const double> b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Percentile bootstrap interval of the sample mean.
inline Interval bootstrap_mean_ci(std::span<const double> sample, double confidence, int resamples,
                                  std::uint64_t seed) {
  if (sample.empty()) throw DegenerateInput("bootstrap: empty sample");
  Engine eng = make_engine(seed, {tag(Stream::kBootstrap)});
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& mean : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) s += sample[pick(eng)];
    mean = s / double(sample.size());
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - confidence) / 2.0;
  auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::clamp(q * double(means.size() - 1), 0.0, double(means.size() - 1)));
    return means[idx];
  };
  return {at(tail), at(1.0 - tail)};
}

/// Width of the histogram bins in blocks_hist.csv, dB.
inline constexpr double kHistogramBinDb = 0.1;

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

/// Bins aligned to multiples of `width`.
inline std::vector<HistogramBin> histogram(std::span<const double> values, double width) {
  std::vector<HistogramBin> bins;
  if (values.empty()) return bins;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) return bins;
  const long first = static_cast<long>(std::floor(lo / width));
  const long last = static_cast<long>(std::floor(hi / width));
  for (long b = first; b <= last; ++b) bins.push_back({double(b) * width, double(b + 1) * width, 0});
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    const long b = static_cast<long>(std::floor(v / width)) - first;
    ++bins[static_cast<std::size_t>(b)].count;
  }
  return bins;
}

/// Formats a double for CSV output: fixed 6 decimals, "-inf"/"inf"/"nan".
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct ScatterExport {
  std::string blocks_csv;     // block_id,edi_db,snr_db
  std::string histogram_csv;  // quantity,bin_low_db,bin_high_db,count
};

inline ScatterExport scatter_export(std::span<const double> snr_db, std::span<const double> edi_db) {
  if (snr_db.size() != edi_db.size()) throw ConfigError("scatter_export: misaligned block records");
  ScatterExport out;
  std::ostringstream rows;
  rows << "block_id,edi_db,snr_db\n";
  for (std::size_t b = 0; b < snr_db.size(); ++b) {
    rows << b << ',' << csv_number(edi_db[b]) << ',' << csv_number(snr_db[b]) << '\n';
  }
  out.blocks_csv = rows.str();
  std::ostringstream hist;
  hist << "quantity,bin_low_db,bin_high_db,count\n";
  for (const auto& [name, values] : {std::pair{"edi_db", edi_db}, std::pair{"snr_db", snr_db}}) {
    for (const auto& bin : histogram(values, kHistogramBinDb)) {
      hist << name << ',' << csv_number(bin.low) << ',' << csv_number(bin.high) << ',' << bin.count << '\n';
    }
  }
  out.histogram_csv = hist.str();
  return out;
}

}  // namespace paslab
