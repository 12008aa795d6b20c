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

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heralded/detection.hpp"
#include "heralded/slm.hpp"
#include "heralded/spdc.hpp"

namespace heralded {

/// Full setup: crystal grid, source, idler relay to D2, signal Fourier lens
/// to the SLM, SLM imaged onto D1 through the HWP and PBS.
struct ExperimentConfig {
  std::size_t grid_samples = 1024;
  double crystal_pitch = 20.25e-6;
  SpdcParams spdc;
  IdlerOptics idler_optics = Imaging{1.0};
  double signal_focal = 0.4096;
  double d1_magnification = 1.0;
  DetectorSpec d1 = BucketDetector{};
  DetectorSpec d2 = PointDetector{0.0, 0.0, 50e-6};
  bool clip_to_mask = true;
  double shots = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  void validate() const;
};

/// x-axis biphoton on the crystal grid; the y axis is identical.
BiphotonAxis make_source(const ExperimentConfig& cfg);

/// Heralded signal photon in the SLM plane, as the real field sqrt(rho) of
/// its (mixed) intensity rho. Unit total probability.
struct SlmIllumination {
  ScalarField field;
  double herald_probability;
};

SlmIllumination illuminate_slm(const ExperimentConfig& cfg, const BiphotonAxis& source);

/// Port probabilities (p+, p-) conditioned on the herald: modulate, optional
/// clip, HWP, relay to D1, PBS and the D1 detector.
std::pair<double, double> detect_coincidences(const ExperimentConfig& cfg,
                                              const SlmIllumination& light, const PhaseMask& mask);

std::pair<double, double> coincidence_probabilities(const ExperimentConfig& cfg, const PhaseMask& mask);

/// Analytic probabilities when shots == 0, otherwise Poisson counts from
/// stream (cfg.seed, stream).
CoincidenceRecord make_record(const ExperimentConfig& cfg, std::pair<double, double> probabilities,
                              std::uint64_t stream);

struct SweepSettings {
  std::vector<IdlerOptics> configurations{Imaging{1.0}, FourierLens{0.4096}};
  std::vector<double> fractions{0.5, 0.3, 0.1};
  std::vector<std::size_t> sizes{2, 4, 8, 16, 32};
  std::size_t masks_per_point = 10;
  std::size_t mask_pixels = 128;
  double pixel_pitch = 8e-6;
};

struct SweepRow {
  std::string config;
  double fraction;
  std::size_t size;
  std::uint64_t mask_seed;
  CoincidenceRecord record;
  double c_plus_pct;
};

/// Seed of the k-th random mask at (p, N); shared by all configurations.
std::uint64_t sweep_mask_seed(std::uint64_t seed, double fraction, std::size_t size, std::size_t k);

/// Random N x N masks of mask_pixels / N pixels per cell. Rows are sorted by
/// (config, p, N, seed).
std::vector<SweepRow> run_proportion_sweep(const ExperimentConfig& cfg, const SweepSettings& settings);

struct VisibilityRow {
  std::string config;
  double d2_position;
  CoincidenceRecord record;
  double visibility;
};

/// Moves D2 along y through `d2_positions` (meters) with the configured idler
/// optics and D1 point detector.
std::vector<VisibilityRow> run_visibility_scan(const ExperimentConfig& cfg, const PhaseMask& stripe_mask,
                                               const std::vector<double>& d2_positions);

/// Default scan: -560 um to +560 um in 40 um steps.
std::vector<double> default_scan_positions();

/// 17 x 17 cells of 70 pixels, rows alternating white/black from a white row.
PhaseMask default_stripe_mask();

}  // namespace heralded
