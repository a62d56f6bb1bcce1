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

// paslab command-line front end.
//
//   paslab design   --modulation 256 --rate 2.4 --n 1800 --v 4
//   paslab shape    --composition 4,3,2,1 --k 10 -i bits.txt -o amps.txt
//   paslab shape    --modulation 256 --rate 2.4 --n 1800 --list v=4 -i bits.txt -o amps.txt --sidecar sel.csv
//   paslab deshape  ... (same code options) -i amps.txt -o bits.txt
//   paslab edi      --window 100 -i symbols.csv
//   paslab simulate --config presets/desk_block_scatter.json [--set wdm.launch_power_dbm=-2]
//   paslab sweep    --config presets/desk_power.json --out results/
//   paslab validate --config presets/full_reference.json
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 numerical abort.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "paslab/ccdm.hpp"
#include "paslab/edi.hpp"
#include "paslab/error.hpp"
#include "paslab/harness/config.hpp"
#include "paslab/harness/sweeps.hpp"
#include "paslab/lccdm.hpp"
#include "paslab/metrics.hpp"
#include "paslab/parallel.hpp"
#include "paslab/shaping.hpp"

namespace {

using namespace paslab;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Code selection shared by design/shape/deshape.
struct CodeOptions {
  int modulation = 256;
  double rate = 0.0;
  int n = 0;
  int v = 0;
  std::string list;         // "v=<v>" enables list encoding
  std::string composition;  // explicit counts, overrides the rate design
  int k = 0;
  int window = 0;
  std::string flip = "prefix";

  void add_to(CLI::App* app) {
    app->add_option("--modulation", modulation, "square QAM order (PAM per dimension)")->capture_default_str();
    app->add_option("--rate", rate, "shaping rate R_s in bit/amplitude");
    app->add_option("--n", n, "blocklength");
    app->add_option("--v", v, "flipping bits (design only)");
    app->add_option("--list", list, "list encoding, given as v=<v>");
    app->add_option("--composition", composition, "comma-separated counts over amplitudes 1,3,5,...");
    app->add_option("--k", k, "input bits for an explicit composition (default: floor log2 of the codebook size)");
    app->add_option("--window", window, "EDI window W (default 100 for n >= 600, else 10)");
    app->add_option("--flip", flip, "flipping-bit position: prefix or suffix")->capture_default_str();
  }

  [[nodiscard]] bool listed() const { return !list.empty(); }

  [[nodiscard]] int list_v() const {
    if (list.rfind("v=", 0) != 0) throw ConfigError("--list expects v=<v>, got '" + list + "'");
    try {
      return std::stoi(list.substr(2));
    } catch (const std::exception&) {
      throw ConfigError("--list expects v=<v>, got '" + list + "'");
    }
  }

  [[nodiscard]] int num_amplitudes() const {
    const int pam = static_cast<int>(std::lround(std::sqrt(double(modulation))));
    if (pam * pam != modulation || pam < 2 || (pam & (pam - 1)) != 0) {
      throw ConfigError("--modulation must be a square QAM order such as 16, 64 or 256");
    }
    return pam / 2;
  }

  /// Composition and input length k (including flipping bits).
  [[nodiscard]] std::pair<Composition, int> code(int flip_bits) const {
    if (!composition.empty()) {
      std::vector<int> counts;
      std::stringstream ss(composition);
      std::string item;
      while (std::getline(ss, item, ',')) counts.push_back(std::stoi(item));
      Composition c(Composition::pam_alphabet(static_cast<int>(counts.size())), counts);
      const int kk = k > 0 ? k : max_input_length(c);
      if (kk > max_input_length(c)) throw ConfigError("--k exceeds floor(log2) of the codebook size");
      return {c, kk};
    }
    if (rate <= 0 || n <= 0) throw ConfigError("give either --composition or both --rate and --n");
    const auto d = design_shaping(num_amplitudes(), rate, n, flip_bits);
    return {d.composition, d.rate.k};
  }
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* is = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw ConfigError("cannot open " + path);
    is = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

AmplitudeBlock parse_amplitudes(const std::string& line) {
  AmplitudeBlock a;
  std::istringstream is(line);
  int x = 0;
  while (is >> x) a.push_back(x);
  if (!is.eof()) throw ConfigError("malformed amplitude line: " + line);
  return a;
}

std::string format_amplitudes(const AmplitudeBlock& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(a[i]);
  }
  return s;
}

BitBlock parse_bits(const std::string& line, std::size_t expected) {
  std::string trimmed;
  for (char ch : line) {
    if (ch != ' ' && ch != '\t') trimmed += ch;
  }
  const BitBlock b = BitBlock::from_string(trimmed);
  if (b.size() != expected) {
    throw ConfigError("bit block has " + std::to_string(b.size()) + " bits, expected " + std::to_string(expected));
  }
  return b;
}

int cmd_design(const CodeOptions& o) {
  if (o.rate <= 0 || o.n <= 0) throw ConfigError("design needs --rate and --n");
  const auto d = design_shaping(o.num_amplitudes(), o.rate, o.n, o.v);
  json comp = json::object();
  for (std::size_t i = 0; i < d.composition.size(); ++i) {
    comp[std::to_string(d.composition.alphabet()[i])] = d.composition.counts()[i];
  }
  json report = {{"modulation", o.modulation},
                 {"num_amplitudes", o.num_amplitudes()},
                 {"n", o.n},
                 {"shaping_rate", o.rate},
                 {"v", o.v},
                 {"k", d.rate.k},
                 {"lambda", d.lambda},
                 {"entropy_bits", d.entropy_bits},
                 {"rate_loss_list", d.rate_loss},
                 {"max_input_length", d.max_input_length},
                 {"composition", comp}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_shape(const CodeOptions& o, const std::string& in, const std::string& out, const std::string& sidecar) {
  const auto lines = read_lines(in);
  Output os(out);
  if (!o.listed()) {
    const auto [c, k] = o.code(0);
    const Ccdm ccdm(c, k);
    for (const auto& line : lines) os.stream() << format_amplitudes(ccdm.encode(parse_bits(line, std::size_t(k)))) << '\n';
    return 0;
  }
  const int v = o.list_v();
  const auto [c, k] = o.code(v);
  if (lines.size() % 2 != 0) throw ConfigError("list encoding needs pairs of lines (in-phase, quadrature)");
  const int window = o.window > 0 ? o.window : default_window(c.n());
  const Lccdm lccdm(LccdmConfig{c, k, v, window, flip_position_from_string(o.flip)});
  const std::size_t info = static_cast<std::size_t>(k - v);
  std::optional<Output> side;
  if (!sidecar.empty()) {
    side.emplace(sidecar);
    side->stream() << "block_id,selected_i,selected_j,edi_db\n";
  }
  for (std::size_t b = 0; b < lines.size() / 2; ++b) {
    const auto sel = lccdm.encode(parse_bits(lines[2 * b], info), parse_bits(lines[2 * b + 1], info));
    os.stream() << format_amplitudes(sel.in_phase) << '\n' << format_amplitudes(sel.quadrature) << '\n';
    if (side) {
      side->stream() << b << ',' << sel.index_i << ',' << sel.index_j << ',' << csv_number(sel.edi.db) << '\n';
    }
  }
  return 0;
}

int cmd_deshape(const CodeOptions& o, const std::string& in, const std::string& out) {
  const auto lines = read_lines(in);
  Output os(out);
  if (!o.listed()) {
    const auto [c, k] = o.code(0);
    const Ccdm ccdm(c, k);
    for (const auto& line : lines) os.stream() << ccdm.decode(parse_amplitudes(line)).to_string() << '\n';
    return 0;
  }
  const int v = o.list_v();
  const auto [c, k] = o.code(v);
  if (lines.size() % 2 != 0) throw ConfigError("list decoding needs pairs of lines (in-phase, quadrature)");
  const int window = o.window > 0 ? o.window : default_window(c.n());
  const Lccdm lccdm(LccdmConfig{c, k, v, window, flip_position_from_string(o.flip)});
  for (std::size_t b = 0; b < lines.size() / 2; ++b) {
    const auto [bi, bq] = lccdm.decode(parse_amplitudes(lines[2 * b]), parse_amplitudes(lines[2 * b + 1]));
    os.stream() << bi.to_string() << '\n' << bq.to_string() << '\n';
  }
  return 0;
}

int cmd_edi(int window, const std::string& in, const std::string& out) {
  const auto lines = read_lines(in);
  Output os(out);
  os.stream() << "block_id,edi_linear,edi_db\n";
  for (std::size_t b = 0; b < lines.size(); ++b) {
    std::vector<double> values;
    std::stringstream ss(lines[b]);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("block " + std::to_string(b) + ": '" + item + "' is not a number");
      }
    }
    if (values.size() % 2 != 0) throw ConfigError("block " + std::to_string(b) + ": odd number of re,im values");
    std::vector<std::complex<double>> x(values.size() / 2);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = {values[2 * t], values[2 * t + 1]};
    const int w = window > 0 ? window : default_window(static_cast<int>(x.size()));
    const auto e = edi_estimate(x, w);
    char lin[64];
    std::snprintf(lin, sizeof lin, "%.9g", e.linear);
    os.stream() << b << ',' << lin << ',' << csv_number(e.db) << '\n';
  }
  return 0;
}

struct ExperimentOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int workers = 0;

  void add_to(CLI::App* app) {
    app->add_option("-c,--config", config, "experiment JSON file")->required();
    app->add_option("--set", overrides, "override a config value, key.path=value (repeatable)");
    app->add_option("--out", out, "output directory (overrides PASLAB_OUTPUT_DIR and the config)");
    app->add_option("--workers", workers, "worker threads (default: PASLAB_WORKERS or all cores)");
  }

  [[nodiscard]] json document() const {
    json doc = harness::load_config_json(config);
    for (const auto& o : overrides) harness::apply_override(doc, o);
    return doc;
  }

  [[nodiscard]] std::filesystem::path output_dir(const harness::ExperimentSpec& s) const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("PASLAB_OUTPUT_DIR")) {
      if (*env) return env;
    }
    return s.output_dir;
  }

  [[nodiscard]] int worker_count() const { return workers > 0 ? workers : default_workers(); }
};

void report_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

int cmd_simulate(const ExperimentOptions& o, const std::string& dump) {
  auto spec = harness::load_spec(o.document());
  spec.sweep.axis = harness::SweepAxis::kPower;
  spec.sweep.launch_powers_dbm = {spec.wdm.launch_power_dbm};
  harness::SweepOutput result;
  if (dump.empty()) {
    result = harness::run_power_sweep(spec, o.worker_count());
  } else {
    // Dumps are per variant, so run sequentially.
    result.axis = harness::SweepAxis::kPower;
    for (const auto& v : spec.variants()) {
      auto setup = harness::setup_for(spec, spec.shaper.n, spec.wdm.launch_power_dbm, spec.link.num_spans);
      setup.waveform_dump = dump + "_" + v.name();
      const auto r = harness::run_transmission(setup, v, o.worker_count());
      const harness::detail::Point p{v, spec.shaper.n, spec.wdm.launch_power_dbm, spec.link.num_spans};
      result.rows.push_back(harness::detail::row_from(spec, p, r));
      result.blocks.push_back(harness::detail::blocks_from(spec, p, r));
    }
  }
  report_written(harness::write_outputs(result, o.output_dir(spec)));
  return 0;
}

int cmd_sweep(const ExperimentOptions& o) {
  const auto spec = harness::load_spec(o.document());
  const auto result = harness::run_sweep(spec, o.worker_count());
  report_written(harness::write_outputs(result, o.output_dir(spec)));
  return 0;
}

int cmd_validate(const ExperimentOptions& o) {
  const auto spec = harness::spec_from_json(o.document());
  const auto issues = harness::validate_config(spec);
  std::cout << harness::issues_to_json(issues).dump(2) << '\n';
  return issues.empty() ? 0 : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paslab: probabilistic amplitude shaping with list-encoding CCDM and fiber simulation"};
  app.require_subcommand(1);

  CodeOptions design_opts, shape_opts, deshape_opts;
  auto* design = app.add_subcommand("design", "rate-match a composition and report k, lambda, entropy and rate loss");
  design_opts.add_to(design);

  std::string shape_in = "-", shape_out = "-", sidecar;
  auto* shape = app.add_subcommand("shape", "encode bit blocks into amplitude blocks");
  shape_opts.add_to(shape);
  shape->add_option("-i,--input", shape_in, "bit blocks, one 0/1 string per line ('-' for stdin)");
  shape->add_option("-o,--output", shape_out, "amplitude blocks ('-' for stdout)");
  shape->add_option("--sidecar", sidecar, "CSV of selected candidates (list encoding only)");

  std::string deshape_in = "-", deshape_out = "-";
  auto* deshape = app.add_subcommand("deshape", "decode amplitude blocks back into bit blocks");
  deshape_opts.add_to(deshape);
  deshape->add_option("-i,--input", deshape_in, "amplitude blocks, whitespace-separated integers per line");
  deshape->add_option("-o,--output", deshape_out, "bit blocks");

  int edi_window = 0;
  std::string edi_in = "-", edi_out = "-";
  auto* edi = app.add_subcommand("edi", "energy dispersion index of symbol blocks");
  edi->add_option("-w,--window", edi_window, "window W (default 100 for n >= 600, else 10)");
  edi->add_option("-i,--input", edi_in, "CSV, one block per line as re,im,re,im,...");
  edi->add_option("-o,--output", edi_out, "CSV block_id,edi_linear,edi_db");

  ExperimentOptions sim_opts, sweep_opts, validate_opts;
  std::string dump;
  auto* simulate = app.add_subcommand("simulate", "one transmission per variant at wdm.launch_power_dbm");
  sim_opts.add_to(simulate);
  simulate->add_option("--dump-waveform", dump, "path prefix for launched/received field dumps");
  auto* sweep = app.add_subcommand("sweep", "run the configured sweep and write CSV files");
  sweep_opts.add_to(sweep);
  auto* validate = app.add_subcommand("validate", "check a configuration and print the error list as JSON");
  validate_opts.add_to(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*design) return cmd_design(design_opts);
    if (*shape) return cmd_shape(shape_opts, shape_in, shape_out, sidecar);
    if (*deshape) return cmd_deshape(deshape_opts, deshape_in, deshape_out);
    if (*edi) return cmd_edi(edi_window, edi_in, edi_out);
    if (*simulate) return cmd_simulate(sim_opts, dump);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*validate) return cmd_validate(validate_opts);
  } catch (const NumericalInstability& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CompositionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const RankOutOfRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
