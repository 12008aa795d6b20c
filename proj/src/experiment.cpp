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

#include "heralded/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

#include "heralded/errors.hpp"
#include "heralded/fft.hpp"
#include "heralded/parallel.hpp"
#include "heralded/rng.hpp"

namespace heralded {
namespace {

void check_detector(const DetectorSpec& det, const char* name) {
  if (const auto* p = std::get_if<PointDetector>(&det)) {
    if (!(p->pinhole_radius > 0.0) || !std::isfinite(p->pinhole_radius) || !std::isfinite(p->x) ||
        !std::isfinite(p->y)) {
      throw DomainError(std::string(name) + " pinhole must have a positive radius and finite position");
    }
  }
}

// SLM-plane intensity of a unit-power crystal-plane state along one axis.
std::vector<double> slm_intensity(const std::vector<Complex>& state, double intensity_scale) {
  std::vector<Complex> a(state);
  fft::centered_1d(a);
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::norm(a[k]) * intensity_scale;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  Axis(grid_samples, crystal_pitch);
  spdc.validate();
  heralded::validate(idler_optics);
  if (!(signal_focal > 0.0) || !std::isfinite(signal_focal)) {
    throw DomainError("signal Fourier lens focal length must be positive");
  }
  if (d1_magnification == 0.0 || !std::isfinite(d1_magnification)) {
    throw DomainError("D1 magnification must be finite and nonzero");
  }
  if (!(shots >= 0.0) || !std::isfinite(shots)) throw DomainError("shots must be finite and non-negative");
  check_detector(d1, "D1");
  check_detector(d2, "D2");
}

BiphotonAxis make_source(const ExperimentConfig& cfg) {
  cfg.validate();
  Axis crystal(cfg.grid_samples, cfg.crystal_pitch);
  return make_biphoton_axis(cfg.spdc, crystal, crystal);
}

SlmIllumination illuminate_slm(const ExperimentConfig& cfg, const BiphotonAxis& source) {
  cfg.validate();
  const auto* d2 = std::get_if<PointDetector>(&cfg.d2);
  if (d2 == nullptr) throw DomainError("D2 must be a point detector to herald the signal photon");
  HeraldedMixture mix = herald_mixture(source, source, cfg.idler_optics, *d2);

  const Axis crystal = source.signal_axis();
  const Axis slm = fourier_axis(crystal, source.wavelength(), cfg.signal_focal);
  const double scale = crystal.pitch() / slm.pitch();
  std::vector<std::vector<double>> ix, iy;
  for (const auto& s : mix.x_states) ix.push_back(slm_intensity(s, scale));
  for (const auto& s : mix.y_states) iy.push_back(slm_intensity(s, scale));

  const std::size_t n = slm.size();
  std::vector<double> rho(n * n, 0.0);
  for (const auto& c : mix.components) {
    const std::vector<double>& px = ix[c.x_state];
    const std::vector<double>& py = iy[c.y_state];
    for (std::size_t y = 0; y < n; ++y) {
      double wy = c.weight * py[y];
      if (wy == 0.0) continue;
      double* row = rho.data() + y * n;
      for (std::size_t x = 0; x < n; ++x) row[x] += wy * px[x];
    }
  }
  std::vector<Complex> amp(n * n);
  for (std::size_t k = 0; k < amp.size(); ++k) amp[k] = std::sqrt(rho[k]);
  return {ScalarField(Grid(n, n, slm.pitch()), std::move(amp)), mix.herald_probability};
}

std::pair<double, double> detect_coincidences(const ExperimentConfig& cfg,
                                              const SlmIllumination& light, const PhaseMask& mask) {
  PolarizedField pf = modulate(prepare_diagonal(light.field), mask);
  if (cfg.clip_to_mask) pf = clip_to_mask(pf, mask);
  pf = halfwave_rotate(pf);
  PolarizedField at_d1(image_relay(pf.h(), cfg.d1_magnification), image_relay(pf.v(), cfg.d1_magnification));
  auto [port_h, port_v] = pbs_split(at_d1);
  if (std::holds_alternative<BucketDetector>(cfg.d1)) {
    PortRates r = bucket_rates(port_h, port_v);
    return {r.h, r.v};
  }
  return {point_rate(port_h, cfg.d1), point_rate(port_v, cfg.d1)};
}

std::pair<double, double> coincidence_probabilities(const ExperimentConfig& cfg, const PhaseMask& mask) {
  return detect_coincidences(cfg, illuminate_slm(cfg, make_source(cfg)), mask);
}

CoincidenceRecord make_record(const ExperimentConfig& cfg, std::pair<double, double> probabilities,
                              std::uint64_t stream) {
  if (cfg.shots == 0.0) return {probabilities.first, probabilities.second};
  return sample_counts(probabilities.first, probabilities.second, cfg.shots, cfg.seed, stream);
}

std::uint64_t sweep_mask_seed(std::uint64_t seed, double fraction, std::size_t size, std::size_t k) {
  std::uint64_t h = splitmix64_mix(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64_mix(h ^ std::bit_cast<std::uint64_t>(fraction));
  h = splitmix64_mix(h ^ static_cast<std::uint64_t>(size));
  return splitmix64_mix(h ^ static_cast<std::uint64_t>(k));
}

std::vector<SweepRow> run_proportion_sweep(const ExperimentConfig& cfg, const SweepSettings& settings) {
  for (double p : settings.fractions) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sweep fractions must lie in [0, 1]");
  }
  for (std::size_t n : settings.sizes) {
    if (n == 0) throw DomainError("sweep sizes must be at least 1");
  }
  if (settings.mask_pixels == 0) throw DomainError("mask_pixels must be at least 1");

  const BiphotonAxis source = make_source(cfg);
  std::vector<ExperimentConfig> configs;
  std::vector<SlmIllumination> lights;
  for (const IdlerOptics& optics : settings.configurations) {
    ExperimentConfig c = cfg;
    c.idler_optics = optics;
    lights.push_back(illuminate_slm(c, source));
    configs.push_back(c);
  }

  struct Task {
    std::size_t config;
    double fraction;
    std::size_t size;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (double p : settings.fractions) {
      for (std::size_t n : settings.sizes) {
        for (std::size_t k = 0; k < settings.masks_per_point; ++k) {
          tasks.push_back({c, p, n, sweep_mask_seed(cfg.seed, p, n, k)});
        }
      }
    }
  }

  std::vector<SweepRow> rows(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    BinaryMaskSpec spec;
    spec.rows = spec.cols = task.size;
    spec.fraction_white = task.fraction;
    spec.layout = RandomLayout{task.seed};
    spec.cell_pixels = std::max<std::size_t>(1, settings.mask_pixels / task.size);
    spec.pixel_pitch = settings.pixel_pitch;
    const ExperimentConfig& c = configs[task.config];
    auto probs = detect_coincidences(c, lights[task.config], make_binary_mask(spec));
    CoincidenceRecord rec = make_record(c, probs, splitmix64_mix(task.seed + task.config));
    rows[t] = {std::string(configuration_label(c.idler_optics)), task.fraction, task.size, task.seed, rec,
               c_plus_percent(rec)};
  });
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.config, a.fraction, a.size, a.mask_seed) < std::tie(b.config, b.fraction, b.size, b.mask_seed);
  });
  return rows;
}

std::vector<VisibilityRow> run_visibility_scan(const ExperimentConfig& cfg, const PhaseMask& stripe_mask,
                                               const std::vector<double>& d2_positions) {
  if (!std::holds_alternative<PointDetector>(cfg.d1)) {
    throw DomainError("the visibility scan needs a point detector at D1");
  }
  if (!std::holds_alternative<PointDetector>(cfg.d2)) {
    throw DomainError("the visibility scan needs a point detector at D2");
  }
  const BiphotonAxis source = make_source(cfg);
  std::vector<VisibilityRow> rows(d2_positions.size());
  parallel_for(d2_positions.size(), cfg.threads, [&](std::size_t k) {
    ExperimentConfig c = cfg;
    std::get<PointDetector>(c.d2).y = d2_positions[k];
    auto probs = detect_coincidences(c, illuminate_slm(c, source), stripe_mask);
    CoincidenceRecord rec = make_record(c, probs, k);
    rows[k] = {std::string(configuration_label(c.idler_optics)), d2_positions[k], rec, visibility(rec)};
  });
  return rows;
}

std::vector<double> default_scan_positions() {
  std::vector<double> out;
  for (int k = -14; k <= 14; ++k) out.push_back(40e-6 * k);
  return out;
}

PhaseMask default_stripe_mask() {
  BinaryMaskSpec spec;
  spec.rows = spec.cols = 17;
  spec.layout = StripeLayout{1};
  spec.cell_pixels = 70;
  return make_binary_mask(spec);
}

}  // namespace heralded
