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

#include "heralded/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace heralded::cli {
namespace {

using Member = std::variant<double RunConfig::*, std::uint64_t RunConfig::*, bool RunConfig::*,
                            std::string RunConfig::*, std::vector<double> RunConfig::*,
                            std::vector<std::uint64_t> RunConfig::*, std::vector<std::string> RunConfig::*>;

struct Key {
  const char* section;
  const char* name;
  Member member;
};

// Schema order is also the manifest order.
const std::vector<Key>& schema() {
  static const std::vector<Key> keys{
      {"grid", "samples", &RunConfig::grid_samples},
      {"grid", "crystal_pitch_um", &RunConfig::crystal_pitch_um},
      {"spdc", "pump_waist_um", &RunConfig::pump_waist_um},
      {"spdc", "correlation_width_um", &RunConfig::correlation_width_um},
      {"spdc", "pump_wavelength_nm", &RunConfig::pump_wavelength_nm},
      {"spdc", "downconverted_wavelength_nm", &RunConfig::downconverted_wavelength_nm},
      {"idler", "mode", &RunConfig::idler_mode},
      {"idler", "imaging_magnification", &RunConfig::imaging_magnification},
      {"idler", "fourier_focal_mm", &RunConfig::idler_fourier_focal_mm},
      {"signal", "fourier_focal_mm", &RunConfig::signal_fourier_focal_mm},
      {"signal", "d1_magnification", &RunConfig::d1_magnification},
      {"d2", "x_um", &RunConfig::d2_x_um},
      {"d2", "y_um", &RunConfig::d2_y_um},
      {"d2", "pinhole_radius_um", &RunConfig::d2_pinhole_radius_um},
      {"d1", "mode", &RunConfig::d1_mode},
      {"d1", "x_um", &RunConfig::d1_x_um},
      {"d1", "y_um", &RunConfig::d1_y_um},
      {"d1", "pinhole_radius_um", &RunConfig::d1_pinhole_radius_um},
      {"slm", "pixel_pitch_um", &RunConfig::pixel_pitch_um},
      {"slm", "clip_to_mask", &RunConfig::clip_to_mask},
      {"mask", "file", &RunConfig::mask_file},
      {"mask", "rows", &RunConfig::mask_rows},
      {"mask", "cols", &RunConfig::mask_cols},
      {"mask", "fraction_white", &RunConfig::mask_fraction_white},
      {"mask", "layout", &RunConfig::mask_layout},
      {"mask", "seed", &RunConfig::mask_seed},
      {"mask", "stripe_period_cells", &RunConfig::mask_stripe_period_cells},
      {"mask", "cell_pixels", &RunConfig::mask_cell_pixels},
      {"sweep", "configs", &RunConfig::sweep_configs},
      {"sweep", "fractions", &RunConfig::sweep_fractions},
      {"sweep", "sizes", &RunConfig::sweep_sizes},
      {"sweep", "masks_per_point", &RunConfig::sweep_masks_per_point},
      {"sweep", "mask_pixels", &RunConfig::sweep_mask_pixels},
      {"visibility", "positions_um", &RunConfig::scan_positions_um},
      {"visibility", "start_um", &RunConfig::scan_start_um},
      {"visibility", "stop_um", &RunConfig::scan_stop_um},
      {"visibility", "step_um", &RunConfig::scan_step_um},
      {"visibility", "stripe_rows", &RunConfig::stripe_rows},
      {"visibility", "stripe_pixels", &RunConfig::stripe_pixels},
      {"visibility", "d1_x_um", &RunConfig::scan_d1_x_um},
      {"visibility", "d1_y_um", &RunConfig::scan_d1_y_um},
      {"visibility", "d1_pinhole_radius_um", &RunConfig::scan_d1_pinhole_radius_um},
      {"run", "seed", &RunConfig::seed},
      {"run", "shots", &RunConfig::shots},
      {"run", "threads", &RunConfig::threads},
  };
  return keys;
}

const std::set<std::string> kManifestKeys{"tool_version", "subcommand", "config_file", "output_dir"};

class Parser {
 public:
  explicit Parser(const std::string& origin) : origin_(origin) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& what) const {
    throw ConfigError(fmt::format("{}:{}: {}: {}", origin_, node.Mark().line + 1, key, what));
  }

  std::string scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "expected a single value");
    return node.Scalar();
  }

  double real(const YAML::Node& node, const std::string& key) const {
    std::string s = scalar(node, key);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(node, key, fmt::format("expected a finite number, got '{}'", s));
    }
    return v;
  }

  std::uint64_t integer(const YAML::Node& node, const std::string& key) const {
    std::string s = scalar(node, key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(node, key, fmt::format("expected a non-negative integer, got '{}'", s));
    }
    return v;
  }

  bool boolean(const YAML::Node& node, const std::string& key) const {
    std::string s = scalar(node, key);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(node, key, fmt::format("expected true or false, got '{}'", s));
  }

  template <class F>
  auto list(const YAML::Node& node, const std::string& key, F&& element) const {
    if (!node.IsSequence()) fail(node, key, "expected a list");
    std::vector<decltype(element(node, key))> out;
    for (const YAML::Node& item : node) out.push_back(element(item, key));
    return out;
  }

  void assign(RunConfig& cfg, const Key& k, const YAML::Node& node, const std::string& key) const {
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>) {
            cfg.*member = real(node, key);
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            cfg.*member = integer(node, key);
          } else if constexpr (std::is_same_v<T, bool>) {
            cfg.*member = boolean(node, key);
          } else if constexpr (std::is_same_v<T, std::string>) {
            cfg.*member = scalar(node, key);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            cfg.*member = list(node, key, [&](const YAML::Node& n, const std::string& kk) { return real(n, kk); });
          } else if constexpr (std::is_same_v<T, std::vector<std::uint64_t>>) {
            cfg.*member = list(node, key, [&](const YAML::Node& n, const std::string& kk) { return integer(n, kk); });
          } else {
            cfg.*member = list(node, key, [&](const YAML::Node& n, const std::string& kk) { return scalar(n, kk); });
          }
        },
        k.member);
  }

 private:
  std::string origin_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

bool is_power_of_two(std::uint64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

class Checker {
 public:
  explicit Checker(const RunConfig& cfg) : cfg_(cfg) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    auto it = cfg_.lines.find(key);
    if (it == cfg_.lines.end()) throw ConfigError(fmt::format("{}: {}: {}", cfg_.origin, key, what));
    throw ConfigError(fmt::format("{}:{}: {}: {}", cfg_.origin, it->second, key, what));
  }

  void positive(const std::string& key, double v) const {
    if (!(v > 0.0)) fail(key, fmt::format("must be positive, got {:g}", v));
  }

  void at_least_one(const std::string& key, std::uint64_t v) const {
    if (v < 1) fail(key, "must be at least 1");
  }

  void fraction(const std::string& key, double v) const {
    if (!(v >= 0.0 && v <= 1.0)) fail(key, fmt::format("must lie in [0, 1], got {:g}", v));
  }

  void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> options) const {
    for (const char* o : options) {
      if (v == o) return;
    }
    std::string names;
    for (const char* o : options) names += (names.empty() ? "" : ", ") + std::string(o);
    fail(key, fmt::format("'{}' is not one of {}", v, names));
  }

 private:
  const RunConfig& cfg_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}:{}: {}", origin, e.mark.line + 1, e.msg));
  }
  RunConfig cfg;
  cfg.origin = origin;
  if (root.IsNull()) return cfg;
  Parser parser(origin);
  if (!root.IsMap()) parser.fail(root, "<top level>", "expected a mapping of sections");

  for (const auto& section : root) {
    const std::string name = section.first.as<std::string>();
    const YAML::Node& body = section.second;
    if (name == "manifest") {
      if (!body.IsMap()) parser.fail(body, name, "expected a mapping");
      for (const auto& entry : body) {
        std::string key = entry.first.as<std::string>();
        if (!kManifestKeys.count(key)) parser.fail(entry.first, "manifest." + key, "unknown key");
      }
      continue;
    }
    bool known_section = false;
    for (const Key& k : schema()) known_section |= name == k.section;
    if (!known_section) parser.fail(section.first, name, "unknown section");
    if (body.IsNull()) continue;
    if (!body.IsMap()) parser.fail(body, name, "expected a mapping");
    for (const auto& entry : body) {
      const std::string key = entry.first.as<std::string>();
      const std::string full = name + "." + key;
      const Key* match = nullptr;
      for (const Key& k : schema()) {
        if (name == k.section && key == k.name) match = &k;
      }
      if (match == nullptr) parser.fail(entry.first, full, "unknown key");
      parser.assign(cfg, *match, entry.second, full);
      cfg.lines[full] = entry.first.Mark().line + 1;
    }
  }
  check_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void check_config(const RunConfig& cfg) {
  Checker c(cfg);
  if (!is_power_of_two(cfg.grid_samples)) c.fail("grid.samples", "must be a power of two >= 2");
  c.positive("grid.crystal_pitch_um", cfg.crystal_pitch_um);
  c.positive("spdc.pump_waist_um", cfg.pump_waist_um);
  c.positive("spdc.correlation_width_um", cfg.correlation_width_um);
  if (!(cfg.correlation_width_um < cfg.pump_waist_um)) {
    c.fail("spdc.correlation_width_um", "must be smaller than spdc.pump_waist_um");
  }
  c.positive("spdc.pump_wavelength_nm", cfg.pump_wavelength_nm);
  c.positive("spdc.downconverted_wavelength_nm", cfg.downconverted_wavelength_nm);
  if (std::abs(cfg.downconverted_wavelength_nm - 2.0 * cfg.pump_wavelength_nm) > 1e-9 * cfg.downconverted_wavelength_nm) {
    c.fail("spdc.downconverted_wavelength_nm", "must equal twice spdc.pump_wavelength_nm");
  }
  c.one_of("idler.mode", cfg.idler_mode, {"UNC", "COR"});
  if (cfg.imaging_magnification == 0.0) c.fail("idler.imaging_magnification", "must be nonzero");
  c.positive("idler.fourier_focal_mm", cfg.idler_fourier_focal_mm);
  c.positive("signal.fourier_focal_mm", cfg.signal_fourier_focal_mm);
  if (cfg.d1_magnification == 0.0) c.fail("signal.d1_magnification", "must be nonzero");
  c.positive("d2.pinhole_radius_um", cfg.d2_pinhole_radius_um);
  c.one_of("d1.mode", cfg.d1_mode, {"bucket", "point"});
  c.positive("d1.pinhole_radius_um", cfg.d1_pinhole_radius_um);
  c.positive("slm.pixel_pitch_um", cfg.pixel_pitch_um);
  c.at_least_one("mask.rows", cfg.mask_rows);
  c.at_least_one("mask.cols", cfg.mask_cols);
  c.fraction("mask.fraction_white", cfg.mask_fraction_white);
  c.one_of("mask.layout", cfg.mask_layout, {"random", "stripes"});
  c.at_least_one("mask.stripe_period_cells", cfg.mask_stripe_period_cells);
  c.at_least_one("mask.cell_pixels", cfg.mask_cell_pixels);
  if (cfg.sweep_configs.empty()) c.fail("sweep.configs", "must name at least one configuration");
  for (const std::string& s : cfg.sweep_configs) c.one_of("sweep.configs", s, {"UNC", "COR"});
  for (double p : cfg.sweep_fractions) c.fraction("sweep.fractions", p);
  for (std::uint64_t n : cfg.sweep_sizes) c.at_least_one("sweep.sizes", n);
  c.at_least_one("sweep.masks_per_point", cfg.sweep_masks_per_point);
  c.at_least_one("sweep.mask_pixels", cfg.sweep_mask_pixels);
  c.positive("visibility.step_um", cfg.scan_step_um);
  if (cfg.scan_stop_um < cfg.scan_start_um) c.fail("visibility.stop_um", "must not be below visibility.start_um");
  c.at_least_one("visibility.stripe_rows", cfg.stripe_rows);
  c.at_least_one("visibility.stripe_pixels", cfg.stripe_pixels);
  c.positive("visibility.d1_pinhole_radius_um", cfg.scan_d1_pinhole_radius_um);
  if (!(cfg.shots >= 0.0) || !std::isfinite(cfg.shots)) c.fail("run.shots", "must be finite and non-negative");
}

IdlerOptics idler_optics(const RunConfig& cfg, const std::string& mode) {
  if (mode == "UNC") return Imaging{cfg.imaging_magnification};
  if (mode == "COR") return FourierLens{cfg.idler_fourier_focal_mm * 1e-3};
  throw ConfigError(fmt::format("unknown idler configuration '{}' (expected UNC or COR)", mode));
}

ExperimentConfig to_experiment(const RunConfig& cfg) {
  ExperimentConfig e;
  e.grid_samples = cfg.grid_samples;
  e.crystal_pitch = cfg.crystal_pitch_um * 1e-6;
  e.spdc.pump_waist = cfg.pump_waist_um * 1e-6;
  e.spdc.correlation_width = cfg.correlation_width_um * 1e-6;
  e.spdc.lambda_pump = cfg.pump_wavelength_nm * 1e-9;
  e.spdc.lambda_down = cfg.downconverted_wavelength_nm * 1e-9;
  e.idler_optics = idler_optics(cfg, cfg.idler_mode);
  e.signal_focal = cfg.signal_fourier_focal_mm * 1e-3;
  e.d1_magnification = cfg.d1_magnification;
  if (cfg.d1_mode == "point") {
    e.d1 = PointDetector{cfg.d1_x_um * 1e-6, cfg.d1_y_um * 1e-6, cfg.d1_pinhole_radius_um * 1e-6};
  } else {
    e.d1 = BucketDetector{};
  }
  e.d2 = PointDetector{cfg.d2_x_um * 1e-6, cfg.d2_y_um * 1e-6, cfg.d2_pinhole_radius_um * 1e-6};
  e.clip_to_mask = cfg.clip_to_mask;
  e.shots = cfg.shots;
  e.seed = cfg.seed;
  e.threads = cfg.threads;
  return e;
}

SweepSettings to_sweep(const RunConfig& cfg) {
  SweepSettings s;
  s.configurations.clear();
  for (const std::string& c : cfg.sweep_configs) s.configurations.push_back(idler_optics(cfg, c));
  s.fractions = cfg.sweep_fractions;
  s.sizes.assign(cfg.sweep_sizes.begin(), cfg.sweep_sizes.end());
  s.masks_per_point = cfg.sweep_masks_per_point;
  s.mask_pixels = cfg.sweep_mask_pixels;
  s.pixel_pitch = cfg.pixel_pitch_um * 1e-6;
  return s;
}

std::vector<double> scan_positions_um(const RunConfig& cfg) {
  if (!cfg.scan_positions_um.empty()) return cfg.scan_positions_um;
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    double u = cfg.scan_start_um + static_cast<double>(k) * cfg.scan_step_um;
    if (u > cfg.scan_stop_um + 1e-9 * cfg.scan_step_um) break;
    out.push_back(u);
  }
  return out;
}

std::string dump_config(const RunConfig& cfg, const ManifestInfo& info) {
  std::string out = "manifest:\n";
  out += fmt::format("  tool_version: {}\n", quote(info.tool_version));
  out += fmt::format("  subcommand: {}\n", quote(info.subcommand));
  out += fmt::format("  config_file: {}\n", quote(info.config_file));
  out += fmt::format("  output_dir: {}\n", quote(info.output_dir));
  std::string section;
  for (const Key& k : schema()) {
    if (section != k.section) {
      section = k.section;
      out += section + ":\n";
    }
    std::string value = std::visit(
        [&](auto member) -> std::string {
          const auto& v = cfg.*member;
          using T = std::remove_cvref_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            return fmt::format("{:.17g}", v);
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            return fmt::format("{}", v);
          } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, std::string>) {
            return quote(v);
          } else {
            std::string items;
            for (const auto& item : v) {
              if (!items.empty()) items += ", ";
              if constexpr (std::is_same_v<T, std::vector<double>>) {
                items += fmt::format("{:.17g}", item);
              } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                items += quote(item);
              } else {
                items += fmt::format("{}", item);
              }
            }
            return "[" + items + "]";
          }
        },
        k.member);
    out += fmt::format("  {}: {}\n", k.name, value);
  }
  return out;
}

}  // namespace heralded::cli
