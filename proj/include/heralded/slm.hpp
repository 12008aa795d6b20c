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
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "heralded/field.hpp"

namespace heralded {

/// Cell-wise phase pattern displayed on the SLM. Cell (i, j) is row i along y
/// and column j along x; row 0 is at the most negative y. The mask is centred
/// on the optical axis.
class PhaseMask {
 public:
  PhaseMask(std::size_t rows, std::size_t cols, std::vector<double> phases,
            std::size_t cell_pixels = 1, double pixel_pitch = 8e-6);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t cell_pixels() const { return cell_pixels_; }
  double pixel_pitch() const { return pixel_pitch_; }
  double cell_size() const { return static_cast<double>(cell_pixels_) * pixel_pitch_; }
  double width() const { return static_cast<double>(cols_) * cell_size(); }
  double height() const { return static_cast<double>(rows_) * cell_size(); }

  std::span<const double> phases() const { return phases_; }
  double phase(std::size_t i, std::size_t j) const { return phases_[i * cols_ + j]; }

  bool covers(double x, double y) const;

  /// Nearest-cell phase at (x, y); 0 outside the mask.
  double phase_at(double x, double y) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t cell_pixels_;
  double pixel_pitch_;
  std::vector<double> phases_;
};

struct RandomLayout {
  std::uint64_t seed = 0;
};

/// Rows alternate white/black every `period_cells` rows, starting white.
struct StripeLayout {
  std::size_t period_cells = 1;
};

/// White cells carry phase 0, black cells phase pi.
struct BinaryMaskSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  double fraction_white = 0.5;
  std::variant<RandomLayout, StripeLayout> layout = RandomLayout{};
  std::size_t cell_pixels = 1;
  double pixel_pitch = 8e-6;
};

/// Random layouts place exactly round(p * rows * cols) white cells by a seeded
/// Fisher-Yates shuffle. Stripe layouts are fixed by the period; fraction_white
/// is not used for them.
PhaseMask make_binary_mask(const BinaryMaskSpec& spec);

/// phi = acos(g) per cell. Throws DomainError naming the first cell with |g| > 1.
PhaseMask encode_function(std::span<const double> samples, std::size_t rows, std::size_t cols,
                          std::size_t cell_pixels = 1, double pixel_pitch = 8e-6);

/// Fraction of cells with phase exactly 0.
double white_fraction(const PhaseMask& mask);

PolarizedField prepare_diagonal(const ScalarField& field);

/// Applies exp(i phi) to the H component only.
PolarizedField modulate(const PolarizedField& pf, const PhaseMask& mask);

/// Zeroes both components outside the mask's physical extent.
PolarizedField clip_to_mask(const PolarizedField& pf, const PhaseMask& mask);

/// h' = (h + v) / sqrt(2), v' = -(h - v) / sqrt(2).
PolarizedField halfwave_rotate(const PolarizedField& pf);

std::pair<ScalarField, ScalarField> pbs_split(const PolarizedField& pf);

struct PortRates {
  double h = 0.0;
  double v = 0.0;
};

PortRates bucket_rates(const ScalarField& port_h, const ScalarField& port_v);

/// (i_h - i_v) / (i_h + i_v). Throws UndefinedReadoutError for zero total.
double integral_readout(double i_h, double i_v);

struct Dqc1Result {
  double sigma_x = 0.0;
  double normalization = 0.0;
};

/// Normalized real trace of diag(exp(i phi_ij)).
Dqc1Result dqc1_sigma_x(const PhaseMask& mask);

}  // namespace heralded
