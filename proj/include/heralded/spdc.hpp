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
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "heralded/field.hpp"

namespace heralded {

/// Type-I degenerate SPDC source in the transverse plane.
///
/// The two-photon amplitude along one axis is the double-Gaussian
///   psi(xs, xi) ~ exp(-(xs + xi)^2 / (4 w+^2)) * exp(-(xs - xi)^2 / (4 w-^2)),
/// a pump envelope of width w+ times a Gaussian stand-in for phase matching
/// of width w-. Requires 0 < w- < w+ (position-correlated pairs) and
/// lambda_down = 2 lambda_pump.
struct SpdcParams {
  double pump_waist = 500e-6;
  double correlation_width = 25e-6;
  double lambda_pump = 405e-9;
  double lambda_down = 810e-9;

  void validate() const;
};

/// Two-photon amplitude over one transverse axis, signal index major
/// (element [is * n_idler + ii]). Normalized so sum |psi|^2 ps pi = 1.
class BiphotonAxis {
 public:
  BiphotonAxis(Axis signal, Axis idler, double wavelength, std::vector<Complex> amplitudes);

  const Axis& signal_axis() const { return signal_; }
  const Axis& idler_axis() const { return idler_; }
  double wavelength() const { return wavelength_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  Complex operator()(std::size_t is, std::size_t ii) const {
    return amplitudes_[is * idler_.size() + ii];
  }

  /// sum |psi|^2 * pitch_s * pitch_i.
  double norm() const;

 private:
  Axis signal_;
  Axis idler_;
  double wavelength_;
  std::vector<Complex> amplitudes_;
};

/// Idler relay from the crystal to D2 that produces an overall image.
struct Imaging {
  double magnification = 1.0;
};

/// Idler relay from the crystal to D2 that produces an overall Fourier transform.
struct FourierLens {
  double focal = 0.4096;
};

using IdlerOptics = std::variant<Imaging, FourierLens>;

void validate(const IdlerOptics& optics);

/// "UNC" for imaging idler optics, "COR" for Fourier idler optics.
std::string_view configuration_label(const IdlerOptics& optics);

struct PointDetector {
  double x = 0.0;
  double y = 0.0;
  double pinhole_radius = 50e-6;
};

struct BucketDetector {};

using DetectorSpec = std::variant<PointDetector, BucketDetector>;

/// Samples the double-Gaussian amplitude. Throws CoverageError when less than
/// 0.999 of the analytic probability falls on the grid.
BiphotonAxis make_biphoton_axis(const SpdcParams& params, const Axis& signal, const Axis& idler);

/// Sampling of the idler coordinate in the D2 plane.
Axis detection_axis(const BiphotonAxis& bx, const IdlerOptics& optics);

/// Apply the idler optics to the idler index with the field-core transforms.
BiphotonAxis transform_idler(const BiphotonAxis& bx, const IdlerOptics& optics);

/// Signal amplitude at the crystal conditioned on an idler detection at D2
/// coordinate `u`. `amplitude` is normalized to unit power on the signal axis;
/// `density` is the idler detection probability per meter at `u`; it is zero
/// outside the sampled D2 plane.
struct Conditional {
  std::vector<Complex> amplitude;
  double density = 0.0;
};

Conditional condition_signal(const BiphotonAxis& bx, const IdlerOptics& optics, double u);

/// Incoherent heralded state for a finite D2 pinhole. Each component is a
/// separable pure state x_states[x] (x) y_states[y]; weights sum to one.
struct HeraldedMixture {
  struct Component {
    double weight;
    std::size_t x_state;
    std::size_t y_state;
  };

  Axis x_axis;
  Axis y_axis;
  std::vector<std::vector<Complex>> x_states;
  std::vector<std::vector<Complex>> y_states;
  std::vector<Component> components;
  double herald_probability = 0.0;
};

/// Pinholes narrower than one D2-plane sample give the single coherent
/// conditional at the pinhole centre; wider pinholes are sampled on a lattice
/// of D2-plane pitch centred on the pinhole and mixed with probability weights.
HeraldedMixture herald_mixture(const BiphotonAxis& bx, const BiphotonAxis& by,
                               const IdlerOptics& optics, const PointDetector& d2);

/// Coherent heralded signal field at the crystal plane, conditioned at the
/// centre of the D2 pinhole: psi_x(xs) * psi_y(ys), unit power.
ScalarField herald_signal(const BiphotonAxis& bx, const BiphotonAxis& by,
                          const IdlerOptics& optics, const DetectorSpec& d2);

/// RMS width of the conditional signal intensity at the crystal plane.
double conditional_width(const BiphotonAxis& bx, const IdlerOptics& optics, double x_detect);

/// Schmidt number 1 / sum(lambda_k^2) of one axis, from the singular values of
/// the amplitude matrix.
double schmidt_number(const BiphotonAxis& bx);

/// Schmidt number of the separable transverse state bx (x) by.
double schmidt_number(const BiphotonAxis& bx, const BiphotonAxis& by);

/// PHIF1 export: n_x = signal samples, n_y = idler samples. Both axes must
/// share one pitch.
void write_biphoton(std::ostream& out, const BiphotonAxis& bx);

/// Heralding fails below this conditional detection probability.
inline constexpr double kHeraldMissThreshold = 1e-15;

}  // namespace heralded
