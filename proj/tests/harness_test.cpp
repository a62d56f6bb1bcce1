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

#include "paslab/harness/sweeps.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "paslab/harness/config.hpp"

namespace paslab::harness {
namespace {

json full_scale() {
  return json::parse(R"({
    "name": "full",
    "seed": 1,
    "shaper": {"modulation": 256, "n": 1800, "shaping_rate": 2.4, "window": 100,
               "flipping_bits": [0, 4], "fec_rate": 0.8, "uniform_fec_rates": [0.6, 0.6667]},
    "fiber": {"span_length_km": 80, "num_spans": 20, "attenuation_db_per_km": 0.2,
              "dispersion_ps_nm_km": 17, "gamma_per_w_km": 1.37, "center_wavelength_nm": 1550,
              "edfa_noise_figure_db": 6},
    "wdm": {"num_channels": 11, "channel_spacing_ghz": 50, "symbol_rate_gbd": 32, "rrc_rolloff": 0.1},
    "grid": {"step_km": 0.1},
    "sweep": {"axis": "power", "launch_powers_dbm": [-5, -4, -3, -2]}
  })");
}

bool has_issue(const std::vector<ConfigIssue>& issues, const std::string& field) {
  for (const auto& i : issues) {
    if (i.field.rfind(field, 0) == 0) return true;
  }
  return false;
}

TEST(ConfigTest, FullScaleTablesAccepted) {
  const auto spec = spec_from_json(full_scale());
  const auto issues = validate_config(spec);
  EXPECT_TRUE(issues.empty()) << issues_to_json(issues).dump();
  EXPECT_EQ(spec.wdm.num_channels, 11);
  EXPECT_EQ(spec.link.total_length_km(), 1600.0);
  EXPECT_EQ(spec.variants().size(), 4u);
  EXPECT_EQ(fiber::aggregate_samples_per_symbol(spec.wdm, spec.grid), 32);
}

TEST(ConfigTest, RejectsWindowEqualToBlocklength) {
  auto doc = full_scale();
  doc["shaper"]["window"] = 1800;
  EXPECT_TRUE(has_issue(validate_config(spec_from_json(doc)), "shaper.window"));
}

TEST(ConfigTest, RejectsNonIntegerInputLength) {
  auto doc = full_scale();
  doc["shaper"]["n"] = 1801;
  const auto issues = validate_config(spec_from_json(doc));
  ASSERT_TRUE(has_issue(issues, "shaper.shaping_rate"));
  EXPECT_NE(issues_to_json(issues).dump().find("not an integer"), std::string::npos);
}

TEST(ConfigTest, RejectsImpossibleRatesAndMissingSeed) {
  auto doc = full_scale();
  doc.erase("seed");
  doc["shaper"]["shaping_rate"] = 3.1;  // above log2 of 8 amplitudes
  const auto issues = validate_config(spec_from_json(doc));
  EXPECT_TRUE(has_issue(issues, "seed"));
  EXPECT_TRUE(has_issue(issues, "shaper"));
  auto small = full_scale();
  small["shaper"]["flipping_bits"] = {17};
  EXPECT_TRUE(has_issue(validate_config(spec_from_json(small)), "shaper.flipping_bits"));
}

TEST(ConfigTest, RejectsNarrowGridAndBadChannels) {
  auto doc = full_scale();
  doc["wdm"]["num_channels"] = 4;
  EXPECT_TRUE(has_issue(validate_config(spec_from_json(doc)), "wdm"));
  auto off = full_scale();
  off["grid"]["blocks_per_run"] = 1;
  off["shaper"]["n"] = 1805;
  off["shaper"]["shaping_rate"] = 2.4;
  EXPECT_TRUE(has_issue(validate_config(spec_from_json(off)), "grid.blocks_per_run"));
}

TEST(ConfigTest, Overrides) {
  auto doc = full_scale();
  apply_override(doc, "wdm.launch_power_dbm=-2.5");
  apply_override(doc, "shaper.flip_position=suffix");
  apply_override(doc, "sweep.launch_powers_dbm=[-1,0]");
  apply_override(doc, "output_dir=/tmp/x");
  apply_override(doc, "grid.new_section.value=3");
  const auto spec = spec_from_json(doc);
  EXPECT_EQ(spec.wdm.launch_power_dbm, -2.5);
  EXPECT_EQ(spec.shaper.flip, FlipPosition::kSuffix);
  EXPECT_EQ(spec.sweep.launch_powers_dbm, (std::vector<double>{-1, 0}));
  EXPECT_EQ(spec.output_dir, "/tmp/x");
  EXPECT_THROW(apply_override(doc, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(doc, "seed.x=1"), ConfigError);
  EXPECT_THROW(spec_from_json(json::parse(R"({"sweep": {"axis": "time"}})")), ConfigError);
  EXPECT_THROW(spec_from_json(json::parse(R"({"shaper": {"n": "many"}})")), ConfigError);
  EXPECT_THROW(load_spec(json::parse(R"({"shaper": {"n": 1801}})")), ConfigError);
}

TEST(ConfigTest, BlocksPerRunLandsOnDftBins) {
  ExperimentSpec s;
  EXPECT_EQ(blocks_for(s, 1800), 12);
  EXPECT_EQ(blocks_for(s, 180), 112);
  for (int n : {180, 360, 900, 1350, 1800, 2700, 3600, 5400}) {
    const int b = blocks_for(s, n);
    EXPECT_GE(n * b, s.min_symbols_per_channel);
    EXPECT_EQ((n * b * 25) % 16, 0) << n;
  }
  s.blocks_per_run = 3;
  EXPECT_EQ(blocks_for(s, 1800), 3);
}

TEST(RateBookkeepingTest, TotalRates) {
  ShaperParams sh;
  sh.shaping_rate = 2.2;
  EXPECT_NEAR(total_rate_4d({Variant::Kind::kShaped, 0, 0.8}, sh), 9.6, 1e-12);
  sh.shaping_rate = 2.4;
  EXPECT_NEAR(total_rate_4d({Variant::Kind::kShaped, 4, 0.8}, sh), 10.4, 1e-12);
  EXPECT_NEAR(total_rate_4d({Variant::Kind::kUniform, 0, 0.6}, sh), 9.6, 1e-12);
  EXPECT_NEAR(total_rate_4d({Variant::Kind::kUniform, 0, 2.0 / 3.0}, sh), 32.0 / 3.0, 1e-12);
  EXPECT_EQ((Variant{Variant::Kind::kShaped, 4, 0.8}.name()), "lccdm_v4");
  EXPECT_EQ((Variant{Variant::Kind::kShaped, 0, 0.8}.name()), "ccdm");
  EXPECT_EQ((Variant{Variant::Kind::kUniform, 0, 0.6}.name()), "uniform_rc0.6");
}

ExperimentSpec tiny_spec(SweepAxis axis) {
  auto doc = json::parse(R"({
    "seed": 5,
    "shaper": {"n": 1800, "shaping_rate": 2.4, "flipping_bits": [0, 2]},
    "fiber": {"num_spans": 1},
    "grid": {"blocks_per_run": 2},
    "sweep": {"launch_powers_dbm": [-2, 0], "blocklengths": [180, 1800], "simulate_blocklengths": [1800],
              "flipping_bits": [0, 1], "num_spans": [1, 2], "edi_blocks": 20}
  })");
  doc["sweep"]["axis"] = to_string(axis);
  return load_spec(doc);
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(SweepTest, PowerSweepRowContract) {
  const auto out = run_power_sweep(tiny_spec(SweepAxis::kPower), 2);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_EQ(out.rows[0].variant.v, 0);
  EXPECT_EQ(out.rows[1].launch_dbm, 0.0);
  EXPECT_EQ(out.rows[2].variant.v, 2);
  const auto csv = sweep_csv(out);
  EXPECT_EQ(lines(csv), 5u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "variant,v,n,distance_km,rate_bit4d,launch_dbm,snr_db,air_bit4d,ber,mean_edi_db");
  EXPECT_EQ(lines(blocks_csv(out)), 1u + 4u * 2u);
  for (const auto& r : out.rows) {
    EXPECT_GE(r.ber, 0.0);
    EXPECT_LE(r.ber, 0.5);
    EXPECT_LE(r.air_4d, 4.0 * 4.0);
  }
}

TEST(SweepTest, BlocklengthSweep) {
  const auto out = run_blocklength_sweep(tiny_spec(SweepAxis::kBlocklength), 1);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_TRUE(std::isnan(out.rows[0].snr_db));  // n = 180 not simulated
  EXPECT_FALSE(std::isnan(out.rows[2].snr_db));
  EXPECT_GT(out.rows[2].mean_edi_db, out.rows[0].mean_edi_db);  // EDI grows with n for CCDM
  EXPECT_LT(out.rows[1].mean_edi_db, out.rows[0].mean_edi_db);
  EXPECT_LT(out.rows[3].mean_edi_db, out.rows[2].mean_edi_db);
  EXPECT_EQ(out.blocks.size(), 2u);
}

TEST(SweepTest, FlippingSweepCsv) {
  const auto out = run_flipping_sweep(tiny_spec(SweepAxis::kFlipping), 1);
  const auto csv = sweep_csv(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "v,flip_position,mean_edi_db");
  EXPECT_EQ(lines(csv), 5u);
  EXPECT_EQ(out.flip_rows[0].mean_edi_db, out.flip_rows[1].mean_edi_db);
}

TEST(SweepTest, DistanceSweepPicksBestPower) {
  const auto out = run_distance_sweep(tiny_spec(SweepAxis::kDistance), 1);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_EQ(out.rows[0].distance_km, 80.0);
  EXPECT_EQ(out.rows[2].distance_km, 160.0);
  EXPECT_GT(out.rows[0].air_4d, out.rows[2].air_4d);
}

TEST(SweepTest, OutputsAreByteIdentical) {
  const auto spec = tiny_spec(SweepAxis::kPower);
  const auto dir = std::filesystem::temp_directory_path() / "paslab_harness_test";
  std::filesystem::remove_all(dir);
  const auto a = run_sweep(spec, 1);
  const auto b = run_sweep(spec, 3);
  EXPECT_EQ(sweep_csv(a), sweep_csv(b));
  EXPECT_EQ(blocks_csv(a), blocks_csv(b));
  EXPECT_EQ(blocks_hist_csv(a), blocks_hist_csv(b));
  const auto written = write_outputs(a, dir);
  ASSERT_EQ(written.size(), 3u);
  for (const auto& p : written) EXPECT_TRUE(std::filesystem::exists(p));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace paslab::harness
