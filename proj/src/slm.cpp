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

#include "heralded/slm.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "heralded/errors.hpp"
#include "heralded/rng.hpp"

namespace heralded {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cell index of coordinate x on a centred run of `count` cells, or -1 outside.
long cell_index(double x, double cell, std::size_t count) {
  double half = 0.5 * static_cast<double>(count) * cell;
  double t = (x + half) / cell + 1e-9;
  if (t < 0.0) return -1;
  long k = static_cast<long>(std::floor(t));
  return k < static_cast<long>(count) ? k : -1;
}

template <class F>
ScalarField map_field(const ScalarField& f, F&& op) {
  ScalarField out(f.grid());
  const Grid& g = f.grid();
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) out(ix, iy) = op(f(ix, iy), g.x(ix), g.y(iy));
  }
  return out;
}

}  // namespace

PhaseMask::PhaseMask(std::size_t rows, std::size_t cols, std::vector<double> phases,
                     std::size_t cell_pixels, double pixel_pitch)
    : rows_(rows), cols_(cols), cell_pixels_(cell_pixels), pixel_pitch_(pixel_pitch),
      phases_(std::move(phases)) {
  if (rows_ == 0 || cols_ == 0) throw DomainError("mask needs at least one row and column");
  if (cell_pixels_ == 0) throw DomainError("cell_pixels must be at least 1");
  if (!(pixel_pitch_ > 0.0) || !std::isfinite(pixel_pitch_)) {
    throw DomainError("pixel pitch must be positive");
  }
  if (phases_.size() != rows_ * cols_) {
    throw DomainError("mask has " + std::to_string(phases_.size()) + " phases for " +
                      std::to_string(rows_) + "x" + std::to_string(cols_) + " cells");
  }
  for (std::size_t k = 0; k < phases_.size(); ++k) {
    if (!(phases_[k] >= 0.0 && phases_[k] < kTwoPi)) {
      throw DomainError("phase of cell (" + std::to_string(k / cols_) + ", " +
                        std::to_string(k % cols_) + ") is outside [0, 2pi)");
    }
  }
}

bool PhaseMask::covers(double x, double y) const {
  return cell_index(x, cell_size(), cols_) >= 0 && cell_index(y, cell_size(), rows_) >= 0;
}

double PhaseMask::phase_at(double x, double y) const {
  long j = cell_index(x, cell_size(), cols_);
  long i = cell_index(y, cell_size(), rows_);
  if (i < 0 || j < 0) return 0.0;
  return phases_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
}

PhaseMask make_binary_mask(const BinaryMaskSpec& spec) {
  if (!(spec.fraction_white >= 0.0 && spec.fraction_white <= 1.0)) {
    throw DomainError("fraction_white must lie in [0, 1]");
  }
  std::size_t cells = spec.rows * spec.cols;
  std::vector<double> phases(cells, std::numbers::pi);
  if (const auto* random = std::get_if<RandomLayout>(&spec.layout)) {
    auto white = static_cast<std::size_t>(std::llround(spec.fraction_white * static_cast<double>(cells)));
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(random->seed, 0);
    for (std::size_t k = cells; k > 1; --k) {
      std::swap(order[k - 1], order[rng.below(k)]);
    }
    for (std::size_t k = 0; k < white; ++k) phases[order[k]] = 0.0;
  } else {
    std::size_t period = std::get<StripeLayout>(spec.layout).period_cells;
    if (period == 0) throw DomainError("stripe period must be at least one cell");
    for (std::size_t i = 0; i < spec.rows; ++i) {
      if ((i / period) % 2 == 0) {
        for (std::size_t j = 0; j < spec.cols; ++j) phases[i * spec.cols + j] = 0.0;
      }
    }
  }
  return PhaseMask(spec.rows, spec.cols, std::move(phases), spec.cell_pixels, spec.pixel_pitch);
}

PhaseMask encode_function(std::span<const double> samples, std::size_t rows, std::size_t cols,
                          std::size_t cell_pixels, double pixel_pitch) {
  if (samples.size() != rows * cols) throw DomainError("sample count does not match rows x cols");
  std::vector<double> phases(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double g = samples[k];
    if (!(g >= -1.0 && g <= 1.0)) {
      throw DomainError("cannot encode g = " + std::to_string(g) + " at cell (" +
                        std::to_string(k / cols) + ", " + std::to_string(k % cols) +
                        "): |g| must not exceed 1");
    }
    phases[k] = std::acos(g);
  }
  return PhaseMask(rows, cols, std::move(phases), cell_pixels, pixel_pitch);
}

double white_fraction(const PhaseMask& mask) {
  std::size_t white = 0;
  for (double phi : mask.phases()) white += phi == 0.0 ? 1 : 0;
  return static_cast<double>(white) / static_cast<double>(mask.phases().size());
}

PolarizedField prepare_diagonal(const ScalarField& field) {
  ScalarField half = Complex(std::numbers::sqrt2 / 2.0) * field;
  return PolarizedField(half, half);
}

PolarizedField modulate(const PolarizedField& pf, const PhaseMask& mask) {
  ScalarField h = map_field(pf.h(), [&](Complex a, double x, double y) {
    double phi = mask.phase_at(x, y);
    return phi == 0.0 ? a : a * std::polar(1.0, phi);
  });
  return PolarizedField(std::move(h), pf.v());
}

PolarizedField clip_to_mask(const PolarizedField& pf, const PhaseMask& mask) {
  auto clip = [&](Complex a, double x, double y) { return mask.covers(x, y) ? a : Complex{}; };
  return PolarizedField(map_field(pf.h(), clip), map_field(pf.v(), clip));
}

PolarizedField halfwave_rotate(const PolarizedField& pf) {
  const double s = std::numbers::sqrt2 / 2.0;
  ScalarField h(pf.grid());
  ScalarField v(pf.grid());
  auto src_h = pf.h().amplitudes();
  auto src_v = pf.v().amplitudes();
  auto dst_h = h.amplitudes();
  auto dst_v = v.amplitudes();
  for (std::size_t k = 0; k < dst_h.size(); ++k) {
    dst_h[k] = s * (src_h[k] + src_v[k]);
    dst_v[k] = -s * (src_h[k] - src_v[k]);
  }
  return PolarizedField(std::move(h), std::move(v));
}

std::pair<ScalarField, ScalarField> pbs_split(const PolarizedField& pf) { return {pf.h(), pf.v()}; }

PortRates bucket_rates(const ScalarField& port_h, const ScalarField& port_v) {
  return {total_power(port_h), total_power(port_v)};
}

double integral_readout(double i_h, double i_v) {
  double total = i_h + i_v;
  if (!(total > 0.0)) throw UndefinedReadoutError("integral readout of zero total intensity");
  return (i_h - i_v) / total;
}

Dqc1Result dqc1_sigma_x(const PhaseMask& mask) {
  long double sum = 0.0L;
  for (double phi : mask.phases()) sum += std::cos(phi);
  double a = 1.0 / static_cast<double>(mask.rows() * mask.cols());
  return {static_cast<double>(sum) * a, a};
}

}  // namespace heralded
