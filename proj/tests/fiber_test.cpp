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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>

#include "paslab/fiber/edfa.hpp"
#include "paslab/fiber/fft.hpp"
#include "paslab/fiber/link.hpp"
#include "paslab/fiber/receiver.hpp"
#include "paslab/fiber/rrc.hpp"
#include "paslab/fiber/ssfm.hpp"
#include "paslab/fiber/waveform_io.hpp"
#include "paslab/fiber/wdm.hpp"
#include "paslab/harness/transmission.hpp"

namespace paslab::fiber {
namespace {

using cd = std::complex<double>;

Field random_qpsk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  Field x(n);
  for (auto& s : x) s = cd(eng() & 1 ? 1.0 : -1.0, eng() & 1 ? 1.0 : -1.0) / std::sqrt(2.0);
  return x;
}

double power_db(const Field& x) { return linear_to_db(mean_power(x)); }

TEST(FftTest, RoundTripAndParseval) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> g;
  Field x(1000);
  for (auto& v : x) v = {g(eng), g(eng)};
  const Field spec = fft(x);
  double e_time = 0.0, e_freq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    e_time += std::norm(x[k]);
    e_freq += std::norm(spec[k]);
  }
  EXPECT_NEAR(e_freq / double(x.size()), e_time, 1e-9 * e_time);
  const Field back = ifft(spec);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(std::abs(back[k] - x[k]), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(bin_frequency(1, 8, 8.0), 1.0);
  EXPECT_DOUBLE_EQ(bin_frequency(7, 8, 8.0), -1.0);
}

TEST(RrcTest, UnitEnergyAndImpulseResponse) {
  const auto h = rrc_taps(0.1, 2);
  double e = 0.0;
  for (double v : h) e += v * v;
  EXPECT_NEAR(e, 1.0, 1e-9);
  const Field y = rrc_shape(Field{cd(1.0, 0.0)}, 0.1, 2);
  ASSERT_EQ(y.size(), h.size() + 1);
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_DOUBLE_EQ(y[k].real(), h[k]);
  EXPECT_THROW(rrc_taps(0.0, 2), ConfigError);
}

TEST(RrcTest, MatchedFilterCascadeIsIsiFree) {
  const Field x = random_qpsk(4000, 2);
  const Field w = rrc_shape(x, 0.1, 2, 256);
  const Field y = rrc_matched_downsample(w, x.size(), 0.1, 2, 256);
  // Ignore the edges where the truncated filters are only partly filled.
  const std::span<const cd> xs(x.data() + 200, 3600), ys(y.data() + 200, 3600);
  EXPECT_GE(effective_snr_db(xs, ys), 40.0);

  const Field c = rrc_shape_circular(x, 0.1, 2);
  const Field yc = matched_filter_circular(fft(c), 0.1, 2);
  EXPECT_GE(effective_snr_db(x, yc), 40.0);
  // Unit-energy pulse at 2 samples per symbol.
  EXPECT_NEAR(2.0 * mean_power(c), mean_power(x), 0.02 * mean_power(x));
}

TEST(RrcTest, ResampleIsBandLimitedInterpolation) {
  const Field x = random_qpsk(512, 3);
  const Field c = rrc_shape_circular(x, 0.1, 2);
  const Field up = resample_periodic(c, c.size() * 4);
  for (std::size_t t = 0; t < c.size(); ++t) EXPECT_NEAR(std::abs(up[4 * t] - c[t]), 0.0, 1e-12);
  const Field y = matched_filter_circular(fft(up), 0.1, 8);
  EXPECT_GE(effective_snr_db(x, y), 40.0);
}

TEST(WdmTest, SingleChannelIsIdentity) {
  WdmConfig wdm;
  wdm.num_channels = 1;
  const Field x = rrc_shape_circular(random_qpsk(256, 4), 0.1, 2);
  const Field y = wdm_mux({x}, wdm, 2 * wdm.symbol_rate());
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_EQ(y[t], x[t]);
}

TEST(WdmTest, PowerAdditivityAndSpectralPeaks) {
  WdmConfig wdm;  // 3 x 50 GHz at 32 GBd
  const int sps = 8;
  const double fs = sps * wdm.symbol_rate();
  const std::size_t n = 1600;  // 1600 * 50/32 = 2500 bins
  std::vector<Field> ch;
  for (int m = 0; m < 3; ++m) {
    ch.push_back(resample_periodic(rrc_shape_circular(random_qpsk(n, 10 + m), 0.1, 2), n * sps));
  }
  const double single = mean_power(ch[0]);

  // Outer channels only, then the lower one alone.
  std::vector<Field> pair = ch;
  pair[1] = Field(pair[1].size());
  const Field agg = wdm_mux(pair, wdm, fs);
  pair[2] = Field(pair[2].size());
  const Field agg2 = wdm_mux(pair, wdm, fs);
  EXPECT_NEAR(linear_to_db(mean_power(agg)), linear_to_db(mean_power(ch[0]) + mean_power(ch[2])), 0.01);
  EXPECT_NEAR(linear_to_db(mean_power(agg2)), linear_to_db(single), 1e-9);

  const Field full = wdm_mux(ch, wdm, fs);
  const Field spec = fft(full);
  auto band_power = [&](double lo, double hi) {
    double p = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double f = bin_frequency(k, spec.size(), fs);
      if (f >= lo && f < hi) p += std::norm(spec[k]);
    }
    return p;
  };
  const double bw = 0.5 * wdm.symbol_rate();
  const double centre = band_power(-bw, bw);
  const double upper = band_power(50e9 - bw, 50e9 + bw);
  const double lower = band_power(-50e9 - bw, -50e9 + bw);
  const double gap = band_power(25e9 - 2e9, 25e9 + 2e9);
  EXPECT_GT(upper, 1000 * gap);
  EXPECT_GT(lower, 1000 * gap);
  EXPECT_NEAR(upper / centre, 1.0, 0.1);

  EXPECT_THROW(wdm_mux(ch, wdm, 2 * wdm.symbol_rate()), ConfigError);
  EXPECT_THROW(offset_bins(50e9, 1000, fs), ConfigError);
}

TEST(SsfmTest, PureDispersionIsInvertible) {
  FiberLink link;
  link.attenuation_db_per_km = 0.0;
  link.gamma_per_w_km = 0.0;
  SimGrid grid;
  const double fs = 2 * 32e9;
  const Field x = rrc_shape_circular(random_qpsk(2048, 5), 0.1, 2);
  Field y = x;
  ssfm_span(y, link, grid, fs);
  apply_dispersion(y, fs, link.beta2(), -link.span_length_km * 1e3);
  double err = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) err += std::norm(y[t] - x[t]);
  EXPECT_LT(linear_to_db(err / double(x.size()) / mean_power(x)), -40.0);
}

TEST(SsfmTest, SelfPhaseModulationPreservesMagnitude) {
  FiberLink link;
  link.attenuation_db_per_km = 0.0;
  link.dispersion_ps_nm_km = 0.0;
  SimGrid grid;
  Field x = rrc_shape_circular(random_qpsk(1024, 6), 0.1, 2);
  for (auto& v : x) v *= std::sqrt(dbm_to_watt(3.0));
  Field y = x;
  const auto st = ssfm_span(y, link, grid, 64e9);
  EXPECT_GT(st.max_nonlinear_phase, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(std::abs(y[t]), std::abs(x[t]), 1e-12 * (1 + std::abs(x[t])));
  double rotated = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) rotated += std::abs(std::arg(y[t] * std::conj(x[t])));
  EXPECT_GT(rotated, 0.0);
}

TEST(SsfmTest, AnalyticAttenuation) {
  FiberLink link;
  link.gamma_per_w_km = 0.0;
  link.dispersion_ps_nm_km = 0.0;
  SimGrid grid;
  Field x = rrc_shape_circular(random_qpsk(1024, 7), 0.1, 2);
  const double before = power_db(x);
  ssfm_span(x, link, grid, 64e9);
  EXPECT_NEAR(power_db(x) - before, -16.0, 1e-6);
}

TEST(SsfmTest, LosslessPropagationConservesEnergy) {
  FiberLink link;
  link.attenuation_db_per_km = 0.0;
  SimGrid grid;
  Field x = rrc_shape_circular(random_qpsk(2048, 8), 0.1, 2);
  for (auto& v : x) v *= std::sqrt(dbm_to_watt(6.0));
  const double before = mean_power(x);
  ssfm_span(x, link, grid, 64e9);
  EXPECT_NEAR(mean_power(x) / before, 1.0, 1e-6);
}

TEST(SsfmTest, AbortsOnExcessivePhase) {
  FiberLink link;
  SimGrid grid;
  grid.step_km = 80.0;
  Field x(256, cd(std::sqrt(dbm_to_watt(30.0)), 0.0));
  EXPECT_THROW(ssfm_span(x, link, grid, 64e9), NumericalInstability);
  grid.step_km = 1.0;
  grid.nl_phase_abort_rad = 100.0;
  Field y(256, cd(std::sqrt(dbm_to_watt(20.0)), 0.0));
  EXPECT_TRUE(ssfm_span(y, link, grid, 64e9).phase_warning);
}

TEST(EdfaTest, NoiselessAndReproducible) {
  Field x = random_qpsk(1000, 9);
  Field y = x;
  edfa(y, 16.0, -std::numeric_limits<double>::infinity(), 64e9, 193.4e12, 1);
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(std::abs(y[t] - x[t] * std::sqrt(db_to_linear(16.0))), 0.0, 1e-12);
  Field a = x, b = x;
  edfa(a, 16.0, 6.0, 64e9, 193.4e12, 5);
  edfa(b, 16.0, 6.0, 64e9, 193.4e12, 5);
  EXPECT_EQ(a, b);
}

TEST(EdfaTest, AsePowerMatchesAnalyticDensity) {
  const FiberLink link;
  const double fs = 256e9;
  const double nu = link.carrier_frequency();
  const double psd = ase_psd(16.0, 6.0, nu);
  // (G - 1) h nu NF / 2
  EXPECT_NEAR(psd, (std::pow(10.0, 1.6) - 1) * 6.62607015e-34 * nu * std::pow(10.0, 0.6) / 2, 1e-30);
  Field x(1 << 20);
  edfa(x, 16.0, 6.0, fs, nu, 3);
  EXPECT_NEAR(mean_power(x) / (psd * fs), 1.0, 0.05);
  // Power inside a 32 GHz slice of the band.
  const Field spec = fft(x);
  double in_band = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = bin_frequency(k, spec.size(), fs);
    if (f >= 40e9 && f < 72e9) in_band += std::norm(spec[k]);
  }
  in_band /= double(spec.size()) * double(spec.size());
  EXPECT_NEAR(in_band / (psd * 32e9), 1.0, 0.05);
}

TEST(ReceiverTest, SnrEstimator) {
  const Field x = random_qpsk(100000, 11);
  EXPECT_EQ(effective_snr_db(x, x), kSnrCapDb);
  Field twice = x;
  for (auto& v : twice) v *= 2.0;
  EXPECT_EQ(effective_snr_db(x, twice), kSnrCapDb);
  std::mt19937_64 eng(4);
  const double snr_db = 15.0;
  std::normal_distribution<double> g(0.0, std::sqrt(db_to_linear(-snr_db) / 2));
  Field y = x;
  for (auto& v : y) v += cd(g(eng), g(eng));
  EXPECT_NEAR(effective_snr_db(x, y), snr_db, 0.1);
  Field scaled = y;
  for (auto& v : scaled) v *= std::polar(2.0, 0.7);
  EXPECT_NEAR(effective_snr_db(x, scaled), effective_snr_db(x, y), 1e-9);
  const auto blocks = per_block_snr_db(x, y, 1000);
  ASSERT_EQ(blocks.size(), 100u);
  for (double b : blocks) EXPECT_NEAR(b, snr_db, 1.0);
  EXPECT_THROW(per_block_snr_db(x, y, 333), ConfigError);
  EXPECT_THROW(effective_snr_db(Field(10), Field(10)), DegenerateInput);
}

TEST(ReceiverTest, LinearNoiselessLoopback) {
  FiberLink link;
  link.gamma_per_w_km = 0.0;
  link.num_spans = 2;
  link.edfa_noise_figure_db = -std::numeric_limits<double>::infinity();
  WdmConfig wdm;
  SimGrid grid;
  const int sps = aggregate_samples_per_symbol(wdm, grid);
  EXPECT_EQ(sps, 8);
  const double fs = sps * wdm.symbol_rate();
  std::vector<Field> syms, waves;
  for (int m = 0; m < 3; ++m) {
    syms.push_back(random_qpsk(1600, 20 + m));
    waves.push_back(resample_periodic(rrc_shape_circular(syms.back(), 0.1, 2), 1600 * sps));
  }
  Field field = wdm_mux(waves, wdm, fs);
  for (int s = 0; s < link.num_spans; ++s) {
    ssfm_span(field, link, grid, fs);
    edfa(field, link.span_gain_db(), link.edfa_noise_figure_db, fs, link.carrier_frequency(), 1);
  }
  for (int m = 0; m < 3; ++m) {
    const auto rx = receiver_front_end(field, m, wdm, link.beta2(), link.total_length_km() * 1e3, fs, sps,
                                       syms[static_cast<std::size_t>(m)]);
    EXPECT_GE(effective_snr_db(syms[static_cast<std::size_t>(m)], rx.samples), 40.0) << "channel " << m;
  }
  EXPECT_THROW(receiver_front_end(field, 3, wdm, link.beta2(), 0, fs, sps, syms[0]), ConfigError);
}

TEST(ReceiverTest, PhaseRotationInvariance) {
  WdmConfig wdm;
  wdm.num_channels = 1;
  const int sps = 2;
  const double fs = sps * wdm.symbol_rate();
  const Field x = random_qpsk(2000, 30);
  Field w = rrc_shape_circular(x, 0.1, sps);
  std::mt19937_64 eng(2);
  std::normal_distribution<double> g(0.0, 0.1);
  for (auto& v : w) v += cd(g(eng), g(eng));
  Field rotated = w;
  for (auto& v : rotated) v *= std::polar(1.0, 1.234);
  const auto a = receiver_front_end(w, 0, wdm, 0.0, 0.0, fs, sps, x);
  const auto b = receiver_front_end(rotated, 0, wdm, 0.0, 0.0, fs, sps, x);
  EXPECT_NEAR(effective_snr_db(x, a.samples), effective_snr_db(x, b.samples), 1e-9);
}

TEST(ReceiverTest, BackToBackOsnr) {
  // Single channel with white ASE; the matched filter passes one symbol-rate
  // bandwidth of noise, so SNR = P / (psd * R_s).
  WdmConfig wdm;
  wdm.num_channels = 1;
  const int sps = 4;
  const double fs = sps * wdm.symbol_rate();
  const Field x = random_qpsk(50000, 31);
  Field w = rrc_shape_circular(x, 0.1, sps);
  const double launch = dbm_to_watt(-20.0);
  const double g = std::sqrt(launch / mean_power(w));
  for (auto& v : w) v *= g;
  const double nu = 193.4e12;
  edfa(w, 16.0, 6.0, fs, nu, 8);
  const double expected = linear_to_db(db_to_linear(16.0) * launch / (ase_psd(16.0, 6.0, nu) * wdm.symbol_rate()));
  const auto rx = receiver_front_end(w, 0, wdm, 0.0, 0.0, fs, sps, x);
  EXPECT_NEAR(effective_snr_db(x, rx.samples), expected, 0.2);
}

TEST(WaveformIoTest, RoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "paslab_waveform_test.pwf";
  Field x = random_qpsk(333, 40);
  x[5] = {1.25e-3, -7.5};
  write_waveform(path.string(), x);
  EXPECT_EQ(std::filesystem::file_size(path), 16u + 8u * x.size());
  const Field y = read_waveform(path.string());
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    EXPECT_EQ(y[t].real(), double(float(x[t].real())));
    EXPECT_EQ(y[t].imag(), double(float(x[t].imag())));
  }
  std::filesystem::remove(path);
  EXPECT_THROW(read_waveform(path.string()), ConfigError);
}

// Reduced link (2 spans, 3 channels) to keep the test short.
harness::TransmissionSetup short_link(double launch_dbm) {
  harness::TransmissionSetup s;
  s.shaper.n = 1800;
  s.link.num_spans = 2;
  s.wdm.launch_power_dbm = launch_dbm;
  s.grid.blocks_per_run = 2;
  s.seed = 77;
  return s;
}

TEST(TransmissionTest, LinearRegimeSlopeAndNonlinearRollOff) {
  const harness::Variant ccdm{harness::Variant::Kind::kShaped, 0, 0.8};
  const double low = harness::run_transmission(short_link(-16.0), ccdm).snr_db;
  const double high = harness::run_transmission(short_link(-12.0), ccdm).snr_db;
  EXPECT_NEAR((high - low) / 4.0, 1.0, 0.1);
  const double mid = harness::run_transmission(short_link(-2.0), ccdm).snr_db;
  const double hot = harness::run_transmission(short_link(12.0), ccdm).snr_db;
  EXPECT_GT(mid, high);
  EXPECT_LT(hot, mid);
}

TEST(TransmissionTest, Deterministic) {
  const harness::Variant v{harness::Variant::Kind::kShaped, 1, 0.8};
  const auto a = harness::run_transmission(short_link(0.0), v, 1);
  const auto b = harness::run_transmission(short_link(0.0), v, 2);
  EXPECT_EQ(a.snr_db, b.snr_db);
  EXPECT_EQ(a.block_snr_db, b.block_snr_db);
  EXPECT_EQ(a.air_4d, b.air_4d);
}

}  // namespace
}  // namespace paslab::fiber
