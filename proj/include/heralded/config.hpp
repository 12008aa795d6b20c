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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "heralded/experiment.hpp"

namespace heralded::cli {

/// Malformed or invalid configuration. The message names file, line and key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolved run configuration in the units of the file schema (suffixes on the
// keys). Values are converted to meters only when an ExperimentConfig is built,
// so a manifest written with 17 significant digits reproduces them exactly.
struct RunConfig {
  std::uint64_t grid_samples = 1024;
  double crystal_pitch_um = 20.25;

  double pump_waist_um = 500.0;
  double correlation_width_um = 25.0;
  double pump_wavelength_nm = 405.0;
  double downconverted_wavelength_nm = 810.0;

  std::string idler_mode = "UNC";
  double imaging_magnification = 1.0;
  double idler_fourier_focal_mm = 409.6;

  double signal_fourier_focal_mm = 409.6;
  double d1_magnification = 1.0;

  double d2_x_um = 0.0;
  double d2_y_um = 0.0;
  double d2_pinhole_radius_um = 50.0;

  std::string d1_mode = "bucket";
  double d1_x_um = 0.0;
  double d1_y_um = 0.0;
  double d1_pinhole_radius_um = 560.0;

  double pixel_pitch_um = 8.0;
  bool clip_to_mask = true;

  std::string mask_file;
  std::uint64_t mask_rows = 8;
  std::uint64_t mask_cols = 8;
  double mask_fraction_white = 0.5;
  std::string mask_layout = "random";
  std::uint64_t mask_seed = 1;
  std::uint64_t mask_stripe_period_cells = 1;
  std::uint64_t mask_cell_pixels = 16;

  std::vector<std::string> sweep_configs{"UNC", "COR"};
  std::vector<double> sweep_fractions{0.5, 0.3, 0.1};
  std::vector<std::uint64_t> sweep_sizes{2, 4, 8, 16, 32};
  std::uint64_t sweep_masks_per_point = 10;
  std::uint64_t sweep_mask_pixels = 128;

  std::vector<double> scan_positions_um;
  double scan_start_um = -560.0;
  double scan_stop_um = 560.0;
  double scan_step_um = 40.0;
  std::uint64_t stripe_rows = 17;
  std::uint64_t stripe_pixels = 70;
  double scan_d1_x_um = 0.0;
  double scan_d1_y_um = 0.0;
  double scan_d1_pinhole_radius_um = 560.0;

  std::uint64_t seed = 0;
  double shots = 0.0;
  std::uint64_t threads = 0;

  // Source of each value, "file:line", for diagnostics.
  std::string origin = "<defaults>";
  std::map<std::string, int> lines;
};

RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

/// Range and consistency checks; throws ConfigError naming the key.
void check_config(const RunConfig& cfg);

/// Idler optics for "UNC" or "COR".
IdlerOptics idler_optics(const RunConfig& cfg, const std::string& mode);

ExperimentConfig to_experiment(const RunConfig& cfg);
SweepSettings to_sweep(const RunConfig& cfg);

/// Scan positions in micrometers: the explicit list, else start..stop by step.
std::vector<double> scan_positions_um(const RunConfig& cfg);

struct ManifestInfo {
  std::string tool_version;
  std::string subcommand;
  std::string config_file;
  std::string output_dir;
};

/// Complete configuration as YAML, every value expanded, plus a manifest block.
/// Loading the result with parse_config yields the same RunConfig values.
std::string dump_config(const RunConfig& cfg, const ManifestInfo& info);

}  // namespace heralded::cli
