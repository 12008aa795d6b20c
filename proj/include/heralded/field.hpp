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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace heralded {

using Complex = std::complex<double>;

/// One sampled transverse axis. Sample n/2 sits on the optical axis, so the
/// coordinate of sample k is (k - n/2) * pitch.
class Axis {
 public:
  Axis(std::size_t n, double pitch);

  std::size_t size() const { return n_; }
  double pitch() const { return pitch_; }
  double extent() const { return static_cast<double>(n_) * pitch_; }
  std::size_t center() const { return n_ / 2; }

  double coordinate(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * pitch_;
  }

  bool operator==(const Axis&) const = default;

 private:
  std::size_t n_;
  double pitch_;
};

/// Square-pitch 2D sampling of the transverse plane. Sizes are powers of two.
class Grid {
 public:
  Grid(std::size_t nx, std::size_t ny, double pitch);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double pitch() const { return pitch_; }
  std::size_t size() const { return nx_ * ny_; }
  Axis axis_x() const { return Axis(nx_, pitch_); }
  Axis axis_y() const { return Axis(ny_, pitch_); }
  double x(std::size_t ix) const { return axis_x().coordinate(ix); }
  double y(std::size_t iy) const { return axis_y().coordinate(iy); }
  double cell_area() const { return pitch_ * pitch_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double pitch_;
};

/// Complex transverse amplitude on a Grid, row-major with x fastest
/// (index iy * nx + ix). Units are sqrt(probability) per meter, so
/// sum |a|^2 * pitch^2 is a probability.
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  ScalarField(Grid grid, std::vector<Complex> amplitudes);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }

  Complex operator()(std::size_t ix, std::size_t iy) const {
    return amplitudes_[iy * grid_.nx() + ix];
  }
  Complex& operator()(std::size_t ix, std::size_t iy) {
    return amplitudes_[iy * grid_.nx() + ix];
  }

  /// Throws DomainError if any amplitude is NaN or infinite.
  void check_finite() const;

 private:
  Grid grid_;
  std::vector<Complex> amplitudes_;
};

ScalarField operator*(Complex c, const ScalarField& f);
ScalarField operator+(const ScalarField& a, const ScalarField& b);

/// (H, V) Jones components sharing one grid.
class PolarizedField {
 public:
  PolarizedField(ScalarField h, ScalarField v);

  const ScalarField& h() const { return h_; }
  const ScalarField& v() const { return v_; }
  const Grid& grid() const { return h_.grid(); }

  double total_probability() const;

 private:
  ScalarField h_;
  ScalarField v_;
};

/// Constant-amplitude field carrying the given total power.
ScalarField plane_wave(const Grid& grid, double power);

/// sum |a|^2 * pitch^2.
double total_power(const ScalarField& field);

/// Sampling of the back focal plane of a lens: pitch = wavelength * focal / (n * pitch_in).
Axis fourier_axis(const Axis& in, double wavelength, double focal);

/// Ideal thin lens, object in the front focal plane: unitary centred 2D DFT
/// onto the back focal plane. Requires nx == ny so the output pitch stays
/// uniform.
ScalarField fourier_lens(const ScalarField& field, double wavelength, double focal);

/// Ideal imaging relay. |magnification| rescales the pitch; a negative value
/// inverts both coordinates (sample k -> (n - k) mod n).
ScalarField image_relay(const ScalarField& field, double magnification);

/// Parity index of sample k on an axis of n samples: (n - k) mod n.
inline std::size_t mirror_index(std::size_t k, std::size_t n) { return (n - k) % n; }

}  // namespace heralded
