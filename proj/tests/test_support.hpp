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

// Shared helpers for the unit tests: Gaussian builders and brute-force moments.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "heralded/field.hpp"

namespace heralded::testing {

/// Amplitude exp(-((x-x0)^2 + (y-y0)^2) / w^2), normalized to unit power
/// analytically (integral of |.|^2 is pi w^2 / 2).
inline ScalarField gaussian(const Grid& g, double waist, double x0 = 0.0, double y0 = 0.0) {
  ScalarField f(g);
  const double norm = std::sqrt(2.0 / (std::numbers::pi * waist * waist));
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const double dx = g.x(ix) - x0;
      const double dy = g.y(iy) - y0;
      f(ix, iy) = norm * std::exp(-(dx * dx + dy * dy) / (waist * waist));
    }
  }
  return f;
}

inline ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  ScalarField f(g);
  for (auto& a : f.amplitudes()) a = Complex(n01(rng), n01(rng));
  return f;
}

struct Moments {
  double mean_x = 0, mean_y = 0, rms_x = 0, rms_y = 0;
};

inline Moments moments(const ScalarField& f) {
  const Grid& g = f.grid();
  long double s = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const long double p = std::norm(f(ix, iy));
      const long double x = g.x(ix), y = g.y(iy);
      s += p;
      sx += p * x;
      sy += p * y;
      sxx += p * x * x;
      syy += p * y * y;
    }
  }
  Moments m;
  m.mean_x = static_cast<double>(sx / s);
  m.mean_y = static_cast<double>(sy / s);
  m.rms_x = static_cast<double>(std::sqrt(sxx / s - (sx / s) * (sx / s)));
  m.rms_y = static_cast<double>(std::sqrt(syy / s - (sy / s) * (sy / s)));
  return m;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.amplitudes().size(); ++k) {
    d = std::max(d, std::abs(a.amplitudes()[k] - b.amplitudes()[k]));
  }
  return d;
}

/// Largest |amplitude| in the field, used to express tolerances relative to scale.
inline double max_abs(const ScalarField& a) {
  double m = 0;
  for (const auto& v : a.amplitudes()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace heralded::testing
