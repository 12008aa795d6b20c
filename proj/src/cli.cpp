// Copyright 2026 The Heralded Integrator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heralded/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "heralded/config.hpp"
#include "heralded/errors.hpp"
#include "heralded/experiment.hpp"
#include "heralded/mask_io.hpp"

namespace heralded::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string out = "heralded-out";
  std::optional<std::uint64_t> seed;
  std::optional<double> shots;
  bool analytic = false;
  std::optional<std::uint64_t> threads;
  std::optional<std::string> idler;
};

struct MaskOverrides {
  std::string file;
  std::optional<std::uint64_t> rows, cols, seed, cell_pixels;
  std::optional<double> fraction;
  std::optional<std::string> layout;
};

struct MaskGenOptions {
  std::uint64_t rows = 8;
  std::uint64_t cols = 8;
  double fraction = 0.5;
  std::uint64_t seed = 1;
  std::string layout = "random";
  std::uint64_t period = 1;
  std::uint64_t cell_pixels = 16;
  double pixel_pitch_um = 8.0;
  std::string samples;
  std::string format = "pgm";
  std::string output;
};

std::string real(double v) { return fmt::format("{:.9g}", v); }

// Like real() but always shows a decimal point for finite values.
std::string readable(double v) {
  std::string s = real(v);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_idler) {
  cmd->add_option("--config", o.config, "YAML configuration file");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Global seed (overrides run.seed)");
  auto* shots = cmd->add_option("--shots", o.shots, "Expected coincidences per point; 0 = analytic");
  cmd->add_flag("--analytic", o.analytic, "Noiseless probabilities (shots = 0)")->excludes(shots);
  cmd->add_option("--threads", o.threads, "Worker threads; 0 = all cores");
  if (with_idler) {
    cmd->add_option("--idler", o.idler, "Idler configuration")->check(CLI::IsMember({"UNC", "COR"}));
  }
}

RunConfig resolve(const CommonOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.config.empty() && !cfg.mask_file.empty()) {
    fs::path p(cfg.mask_file);
    if (p.is_relative()) p = fs::path(o.config).parent_path() / p;
    cfg.mask_file = fs::absolute(p).lexically_normal().string();
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.shots) cfg.shots = *o.shots;
  if (o.analytic) cfg.shots = 0.0;
  if (o.threads) cfg.threads = *o.threads;
  if (o.idler) cfg.idler_mode = *o.idler;
  check_config(cfg);
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_manifest(const RunConfig& cfg, const CommonOptions& o, const std::string& subcommand) {
  ManifestInfo info{HERALDED_VERSION, subcommand,
                    o.config.empty() ? std::string() : fs::absolute(o.config).lexically_normal().string(), o.out};
  open_output(fs::path(o.out) / "manifest.yaml") << dump_config(cfg, info);
}

PhaseMask config_mask(const RunConfig& cfg) {
  if (!cfg.mask_file.empty()) {
    std::ifstream in(cfg.mask_file);
    if (!in) throw ConfigError(fmt::format("{}: mask.file: cannot open '{}'", cfg.origin, cfg.mask_file));
    try {
      return read_mask_pgm(in);
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("{}: {}", cfg.mask_file, e.what()));
    }
  }
  BinaryMaskSpec spec;
  spec.rows = cfg.mask_rows;
  spec.cols = cfg.mask_cols;
  spec.fraction_white = cfg.mask_fraction_white;
  if (cfg.mask_layout == "stripes") {
    spec.layout = StripeLayout{cfg.mask_stripe_period_cells};
  } else {
    spec.layout = RandomLayout{cfg.mask_seed};
  }
  spec.cell_pixels = cfg.mask_cell_pixels;
  spec.pixel_pitch = cfg.pixel_pitch_um * 1e-6;
  return make_binary_mask(spec);
}

PhaseMask read_mask_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open mask file", path));
  try {
    return read_mask_pgm(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path, e.what()));
  }
}

std::vector<double> read_samples_csv(const std::string& path, std::size_t& rows, std::size_t& cols) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open sample file", path));
  std::vector<double> values;
  std::string line;
  rows = cols = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError(fmt::format("{}:{}: '{}' is not a number", path, line_no, cell));
      }
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols) {
      throw FormatError(fmt::format("{}:{}: expected {} values, found {}", path, line_no, cols, row.size()));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw FormatError(fmt::format("{}: no samples", path));
  return values;
}

int cmd_integrate(const CommonOptions& o, const MaskOverrides& m, std::ostream& out) {
  RunConfig cfg = resolve(o);
  if (!m.file.empty()) cfg.mask_file = fs::absolute(m.file).lexically_normal().string();
  if (m.rows) cfg.mask_rows = *m.rows;
  if (m.cols) cfg.mask_cols = *m.cols;
  if (m.seed) cfg.mask_seed = *m.seed;
  if (m.cell_pixels) cfg.mask_cell_pixels = *m.cell_pixels;
  if (m.fraction) cfg.mask_fraction_white = *m.fraction;
  if (m.layout) cfg.mask_layout = *m.layout;
  check_config(cfg);

  const PhaseMask mask = config_mask(cfg);
  const ExperimentConfig exp = to_experiment(cfg);
  const CoincidenceRecord rec = make_record(exp, coincidence_probabilities(exp, mask), 0);
  const double t = integral_readout(rec.c_plus, rec.c_minus);
  const double pct = c_plus_percent(rec);
  const Dqc1Result dqc1 = dqc1_sigma_x(mask);

  fs::create_directories(o.out);
  auto csv = open_output(fs::path(o.out) / "integrate.csv");
  csv << "config,c_plus,c_minus,c_plus_pct,T,sigma_x\n";
  fmt::print(csv, "{},{},{},{},{},{}\n", cfg.idler_mode, real(rec.c_plus), real(rec.c_minus), real(pct), real(t),
             real(dqc1.sigma_x));
  write_manifest(cfg, o, "integrate");

  fmt::print(out, "config   {}\nmask     {}x{} cells, {} px/cell\n", cfg.idler_mode, mask.rows(), mask.cols(),
             mask.cell_pixels());
  fmt::print(out, "T        {}\nC+ (%)   {}\nsigma_x  {}\n", readable(t), readable(pct), readable(dqc1.sigma_x));
  return kSuccess;
}

int cmd_sweep(const CommonOptions& o, std::ostream& out) {
  const RunConfig cfg = resolve(o);
  const auto rows = run_proportion_sweep(to_experiment(cfg), to_sweep(cfg));
  fs::create_directories(o.out);
  auto csv = open_output(fs::path(o.out) / "sweep.csv");
  csv << "config,p,N,seed,c_plus,c_minus,c_plus_pct\n";
  for (const SweepRow& r : rows) {
    fmt::print(csv, "{},{},{},{},{},{},{}\n", r.config, real(r.fraction), r.size, r.mask_seed, real(r.record.c_plus),
               real(r.record.c_minus), real(r.c_plus_pct));
  }
  write_manifest(cfg, o, "sweep");
  fmt::print(out, "wrote {} rows to {}\n", rows.size(), (fs::path(o.out) / "sweep.csv").string());
  return kSuccess;
}

int cmd_visibility(const CommonOptions& o, std::ostream& out) {
  const RunConfig cfg = resolve(o);
  ExperimentConfig exp = to_experiment(cfg);
  exp.d1 = PointDetector{cfg.scan_d1_x_um * 1e-6, cfg.scan_d1_y_um * 1e-6, cfg.scan_d1_pinhole_radius_um * 1e-6};
  BinaryMaskSpec spec;
  spec.rows = spec.cols = cfg.stripe_rows;
  spec.layout = StripeLayout{1};
  spec.cell_pixels = cfg.stripe_pixels;
  spec.pixel_pitch = cfg.pixel_pitch_um * 1e-6;
  const std::vector<double> positions_um = scan_positions_um(cfg);
  std::vector<double> positions;
  for (double u : positions_um) positions.push_back(u * 1e-6);
  const auto rows = run_visibility_scan(exp, make_binary_mask(spec), positions);

  fs::create_directories(o.out);
  auto csv = open_output(fs::path(o.out) / "visibility.csv");
  csv << "config,d2_um,c_plus,c_minus,visibility\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const VisibilityRow& r = rows[k];
    fmt::print(csv, "{},{},{},{},{}\n", r.config, real(positions_um[k]), real(r.record.c_plus),
               real(r.record.c_minus), real(r.visibility));
  }
  write_manifest(cfg, o, "visibility");
  fmt::print(out, "wrote {} rows to {}\n", rows.size(), (fs::path(o.out) / "visibility.csv").string());
  return kSuccess;
}

int cmd_dqc1(const std::string& path, std::ostream& out) {
  fmt::print(out, "{}\n", readable(dqc1_sigma_x(read_mask_file(path)).sigma_x));
  return kSuccess;
}

int cmd_mask_gen(const MaskGenOptions& g, std::ostream& out) {
  PhaseMask mask = [&] {
    if (!g.samples.empty()) {
      std::size_t rows = 0, cols = 0;
      std::vector<double> values = read_samples_csv(g.samples, rows, cols);
      return encode_function(values, rows, cols, g.cell_pixels, g.pixel_pitch_um * 1e-6);
    }
    BinaryMaskSpec spec;
    spec.rows = g.rows;
    spec.cols = g.cols;
    spec.fraction_white = g.fraction;
    if (g.layout == "stripes") {
      spec.layout = StripeLayout{g.period};
    } else {
      spec.layout = RandomLayout{g.seed};
    }
    spec.cell_pixels = g.cell_pixels;
    spec.pixel_pitch = g.pixel_pitch_um * 1e-6;
    return make_binary_mask(spec);
  }();
  auto emit = [&](std::ostream& s) {
    if (g.format == "csv") {
      write_mask_csv(s, mask);
    } else {
      write_mask_pgm(s, mask);
    }
  };
  if (g.output.empty() || g.output == "-") {
    emit(out);
  } else {
    auto f = open_output(g.output);
    emit(f);
  }
  return kSuccess;
}

int cmd_mask_show(const std::string& path, std::ostream& out) {
  const PhaseMask mask = read_mask_file(path);
  fmt::print(out, "{}: {} rows x {} cols, {} px/cell, pixel pitch {} um\n", path, mask.rows(), mask.cols(),
             mask.cell_pixels(), real(mask.pixel_pitch() * 1e6));
  fmt::print(out, "white fraction {}, sigma_x {}\n", real(white_fraction(mask)), real(dqc1_sigma_x(mask).sigma_x));
  if (mask.cols() > 80) return kSuccess;
  // W = 0, B = pi, otherwise tenths of a turn; top line is the highest row
  for (std::size_t i = mask.rows(); i-- > 0;) {
    std::string line;
    for (std::size_t j = 0; j < mask.cols(); ++j) {
      double phi = mask.phase(i, j);
      if (phi == 0.0) {
        line += 'W';
      } else if (std::abs(phi - std::numbers::pi) < 1e-3) {
        line += 'B';
      } else {
        line += static_cast<char>('0' + static_cast<int>(phi / (2.0 * std::numbers::pi) * 10.0));
      }
    }
    out << line << '\n';
  }
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heralded single-photon optical integration simulator", "heralded"};
  app.set_version_flag("--version", std::string(HERALDED_VERSION));
  app.require_subcommand(1);

  CommonOptions common;
  MaskOverrides overrides;
  MaskGenOptions gen;
  std::string mask_path;

  auto* integrate = app.add_subcommand("integrate", "Integral readout of one mask");
  add_common(integrate, common, true);
  integrate->add_option("--mask", overrides.file, "P2 mask file (overrides mask.file)");
  integrate->add_option("--rows", overrides.rows, "Mask rows");
  integrate->add_option("--cols", overrides.cols, "Mask columns");
  integrate->add_option("--fraction", overrides.fraction, "White-cell fraction");
  integrate->add_option("--mask-seed", overrides.seed, "Random layout seed");
  integrate->add_option("--layout", overrides.layout, "Mask layout")->check(CLI::IsMember({"random", "stripes"}));
  integrate->add_option("--cell-pixels", overrides.cell_pixels, "SLM pixels per cell edge");

  auto* sweep = app.add_subcommand("sweep", "C+ percentage against mask size and white fraction");
  add_common(sweep, common, false);

  auto* vis = app.add_subcommand("visibility", "Visibility as D2 moves across the stripe mask");
  add_common(vis, common, true);

  auto* dqc1 = app.add_subcommand("dqc1", "Normalized trace estimate of a mask");
  dqc1->add_option("mask", mask_path, "P2 mask file")->required();

  auto* mask = app.add_subcommand("mask", "Mask files");
  mask->require_subcommand(1);
  auto* mask_gen = mask->add_subcommand("gen", "Generate a binary or encoded mask");
  mask_gen->add_option("--rows", gen.rows)->capture_default_str();
  mask_gen->add_option("--cols", gen.cols)->capture_default_str();
  mask_gen->add_option("--fraction", gen.fraction, "White-cell fraction")->capture_default_str();
  mask_gen->add_option("--seed", gen.seed)->capture_default_str();
  mask_gen->add_option("--layout", gen.layout)->check(CLI::IsMember({"random", "stripes"}))->capture_default_str();
  mask_gen->add_option("--period", gen.period, "Stripe period in cells")->capture_default_str();
  mask_gen->add_option("--cell-pixels", gen.cell_pixels)->capture_default_str();
  mask_gen->add_option("--pixel-pitch-um", gen.pixel_pitch_um)->capture_default_str();
  mask_gen->add_option("--samples", gen.samples, "CSV matrix g in [-1, 1]; encodes acos(g)");
  mask_gen->add_option("--format", gen.format)->check(CLI::IsMember({"pgm", "csv"}))->capture_default_str();
  mask_gen->add_option("-o,--output", gen.output, "Output file (default stdout)");
  auto* mask_show = mask->add_subcommand("show", "Summarize a mask file");
  mask_show->add_option("mask", mask_path, "P2 mask file")->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (integrate->parsed()) return cmd_integrate(common, overrides, out);
    if (sweep->parsed()) return cmd_sweep(common, out);
    if (vis->parsed()) return cmd_visibility(common, out);
    if (dqc1->parsed()) return cmd_dqc1(mask_path, out);
    if (mask_gen->parsed()) return cmd_mask_gen(gen, out);
    if (mask_show->parsed()) return cmd_mask_show(mask_path, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  } catch (const FormatError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  } catch (const HeraldMissError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPhysicsError;
  } catch (const CoverageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPhysicsError;
  } catch (const UndefinedReadoutError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPhysicsError;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kPhysicsError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
  return kFailure;
}

}  // namespace heralded::cli
