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

#include "heralded/field.hpp"

#include <cmath>
#include <string>

#include "heralded/errors.hpp"
#include "heralded/fft.hpp"

namespace heralded {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_axis(std::size_t n, double pitch) {
  if (n < 2 || !is_power_of_two(n)) {
    throw DomainError("grid sample count must be a power of two >= 2, got " + std::to_string(n));
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw DomainError("grid pitch must be positive and finite");
  }
}

}  // namespace

Axis::Axis(std::size_t n, double pitch) : n_(n), pitch_(pitch) { check_axis(n, pitch); }

Grid::Grid(std::size_t nx, std::size_t ny, double pitch) : nx_(nx), ny_(ny), pitch_(pitch) {
  check_axis(nx, pitch);
  check_axis(ny, pitch);
}

ScalarField::ScalarField(Grid grid) : grid_(grid), amplitudes_(grid.size()) {}

ScalarField::ScalarField(Grid grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) {
    throw DomainError("amplitude count " + std::to_string(amplitudes_.size()) +
                      " does not match grid size " + std::to_string(grid_.size()));
  }
  check_finite();
}

void ScalarField::check_finite() const {
  for (const Complex& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw DomainError("field contains a non-finite amplitude");
    }
  }
}

ScalarField operator*(Complex c, const ScalarField& f) {
  ScalarField out(f.grid());
  auto dst = out.amplitudes();
  auto src = f.amplitudes();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = c * src[k];
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw DomainError("cannot add fields on different grids");
  ScalarField out(a.grid());
  auto dst = out.amplitudes();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = a.amplitudes()[k] + b.amplitudes()[k];
  return out;
}

PolarizedField::PolarizedField(ScalarField h, ScalarField v) : h_(std::move(h)), v_(std::move(v)) {
  if (!(h_.grid() == v_.grid())) throw DomainError("H and V components must share one grid");
}

double PolarizedField::total_probability() const { return total_power(h_) + total_power(v_); }

ScalarField plane_wave(const Grid& grid, double power) {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw DomainError("plane wave power must be finite and non-negative");
  }
  const double area = static_cast<double>(grid.size()) * grid.cell_area();
  return ScalarField(grid, std::vector<Complex>(grid.size(), Complex(std::sqrt(power / area), 0.0)));
}

double total_power(const ScalarField& field) {
  double sum = 0.0;
  for (const Complex& a : field.amplitudes()) sum += std::norm(a);
  return sum * field.grid().cell_area();
}

Axis fourier_axis(const Axis& in, double wavelength, double focal) {
  if (!(wavelength > 0.0) || !(focal > 0.0)) {
    throw DomainError("Fourier lens needs positive wavelength and focal length");
  }
  return Axis(in.size(), wavelength * focal / (static_cast<double>(in.size()) * in.pitch()));
}

ScalarField fourier_lens(const ScalarField& field, double wavelength, double focal) {
  const Grid& g = field.grid();
  if (g.nx() != g.ny()) throw DomainError("Fourier lens requires a square grid");
  const Axis out_axis = fourier_axis(g.axis_x(), wavelength, focal);
  ScalarField out(Grid(g.nx(), g.ny(), out_axis.pitch()),
                  std::vector<Complex>(field.amplitudes().begin(), field.amplitudes().end()));
  // The unitary DFT conserves sum |a|^2; rescale amplitude density to the new pitch.
  auto data = out.amplitudes();
  fft::centered_2d(data, g.ny(), g.nx());
  const double density = g.pitch() / out_axis.pitch();
  for (Complex& a : data) a *= density;
  return out;
}

ScalarField image_relay(const ScalarField& field, double magnification) {
  if (magnification == 0.0 || !std::isfinite(magnification)) {
    throw DomainError("image relay magnification must be finite and non-zero");
  }
  const Grid& g = field.grid();
  const double m = std::abs(magnification);
  ScalarField out(Grid(g.nx(), g.ny(), g.pitch() * m));
  const double scale = 1.0 / m;
  const bool invert = magnification < 0.0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    const std::size_t sy = invert ? mirror_index(iy, g.ny()) : iy;
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const std::size_t sx = invert ? mirror_index(ix, g.nx()) : ix;
      out(ix, iy) = field(sx, sy) * scale;
    }
  }
  return out;
}

}  // namespace heralded
