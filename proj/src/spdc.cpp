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

#include "heralded/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "heralded/errors.hpp"
#include "heralded/fft.hpp"
#include "heralded/field_io.hpp"

namespace heralded {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoverageThreshold = 0.999;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Band-limited interpolation kernel of an n-point centred DFT.
double dirichlet(double t, std::size_t n) {
  double nearest = std::round(t);
  if (std::abs(t - nearest) < 1e-12) {
    long m = static_cast<long>(nearest);
    return m % static_cast<long>(n) == 0 ? 1.0 : 0.0;
  }
  double nd = static_cast<double>(n);
  return std::sin(kPi * t) / (nd * std::tan(kPi * t / nd));
}

// Idler detection-mode vector: conditional amplitude = sum_k psi(s, k) c[k].
std::vector<Complex> detection_mode(const BiphotonAxis& bx, const IdlerOptics& optics, double u) {
  const Axis& idler = bx.idler_axis();
  std::size_t n = idler.size();
  double pitch = idler.pitch();
  std::vector<Complex> c(n);
  std::visit(Overloaded{
                 [&](const Imaging& im) {
                   double m = im.magnification;
                   double scale = 1.0 / std::sqrt(std::abs(m));
                   for (std::size_t k = 0; k < n; ++k) {
                     c[k] = scale * dirichlet((u / m - idler.coordinate(k)) / pitch, n);
                   }
                 },
                 [&](const FourierLens& fl) {
                   double lf = bx.wavelength() * fl.focal;
                   double scale = pitch / std::sqrt(lf);
                   for (std::size_t k = 0; k < n; ++k) {
                     c[k] = std::polar(scale, -2.0 * kPi * u * idler.coordinate(k) / lf);
                   }
                 },
             },
             optics);
  return c;
}

double conditional_rms(const Axis& axis, std::span<const Complex> amplitude) {
  long double p = 0.0L, m1 = 0.0L, m2 = 0.0L;
  for (std::size_t k = 0; k < axis.size(); ++k) {
    long double w = std::norm(amplitude[k]);
    long double x = axis.coordinate(k);
    p += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  if (p <= 0.0L) throw UndefinedReadoutError("conditional state has zero power");
  long double mean = m1 / p;
  return static_cast<double>(std::sqrt(std::max(0.0L, m2 / p - mean * mean)));
}

}  // namespace

void SpdcParams::validate() const {
  for (double v : {pump_waist, correlation_width, lambda_pump, lambda_down}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("SPDC widths and wavelengths must be positive and finite");
    }
  }
  if (!(correlation_width < pump_waist)) {
    throw DomainError(fmt::format("correlation width {:g} m must be smaller than pump waist {:g} m",
                                  correlation_width, pump_waist));
  }
  if (std::abs(lambda_down - 2.0 * lambda_pump) > 1e-9 * lambda_down) {
    throw DomainError(fmt::format("degenerate SPDC needs lambda_down = 2 lambda_pump, got {:g} and {:g}",
                                  lambda_down, lambda_pump));
  }
}

BiphotonAxis::BiphotonAxis(Axis signal, Axis idler, double wavelength,
                           std::vector<Complex> amplitudes)
    : signal_(signal), idler_(idler), wavelength_(wavelength), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != signal_.size() * idler_.size()) {
    throw DomainError("biphoton amplitude count does not match its axes");
  }
  if (!(wavelength_ > 0.0)) throw DomainError("biphoton wavelength must be positive");
}

double BiphotonAxis::norm() const {
  long double s = 0.0L;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return static_cast<double>(s) * signal_.pitch() * idler_.pitch();
}

void validate(const IdlerOptics& optics) {
  std::visit(Overloaded{
                 [](const Imaging& im) {
                   if (im.magnification == 0.0 || !std::isfinite(im.magnification)) {
                     throw DomainError("imaging magnification must be finite and nonzero");
                   }
                 },
                 [](const FourierLens& fl) {
                   if (!(fl.focal > 0.0) || !std::isfinite(fl.focal)) {
                     throw DomainError("Fourier lens focal length must be positive");
                   }
                 },
             },
             optics);
}

std::string_view configuration_label(const IdlerOptics& optics) {
  return std::holds_alternative<Imaging>(optics) ? "UNC" : "COR";
}

BiphotonAxis make_biphoton_axis(const SpdcParams& params, const Axis& signal, const Axis& idler) {
  params.validate();
  double wp = params.pump_waist;
  double wm = params.correlation_width;
  std::size_t ns = signal.size();
  std::size_t ni = idler.size();
  std::vector<Complex> amp(ns * ni);
  long double sum = 0.0L;
  for (std::size_t is = 0; is < ns; ++is) {
    double xs = signal.coordinate(is);
    for (std::size_t ii = 0; ii < ni; ++ii) {
      double xi = idler.coordinate(ii);
      double a = std::exp(-(xs + xi) * (xs + xi) / (4.0 * wp * wp) -
                          (xs - xi) * (xs - xi) / (4.0 * wm * wm));
      amp[is * ni + ii] = a;
      sum += static_cast<long double>(a) * a;
    }
  }
  double captured = static_cast<double>(sum) * signal.pitch() * idler.pitch() / (kPi * wp * wm);
  if (!(captured >= kCoverageThreshold)) {
    throw CoverageError(fmt::format("grid captures only {:.6f} of the biphoton probability "
                                    "(need {})", captured, kCoverageThreshold),
                        captured);
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(sum) * signal.pitch() * idler.pitch());
  for (Complex& a : amp) a *= scale;
  return BiphotonAxis(signal, idler, params.lambda_down, std::move(amp));
}

Axis detection_axis(const BiphotonAxis& bx, const IdlerOptics& optics) {
  validate(optics);
  const Axis& idler = bx.idler_axis();
  return std::visit(Overloaded{
                        [&](const Imaging& im) {
                          return Axis(idler.size(), idler.pitch() * std::abs(im.magnification));
                        },
                        [&](const FourierLens& fl) {
                          return fourier_axis(idler, bx.wavelength(), fl.focal);
                        },
                    },
                    optics);
}

BiphotonAxis transform_idler(const BiphotonAxis& bx, const IdlerOptics& optics) {
  Axis out_axis = detection_axis(bx, optics);
  std::size_t ns = bx.signal_axis().size();
  std::size_t ni = bx.idler_axis().size();
  std::vector<Complex> amp(bx.amplitudes().begin(), bx.amplitudes().end());
  if (const auto* im = std::get_if<Imaging>(&optics)) {
    double scale = 1.0 / std::sqrt(std::abs(im->magnification));
    if (im->magnification < 0.0) {
      for (std::size_t is = 0; is < ns; ++is) {
        for (std::size_t ii = 0; ii < ni; ++ii) {
          amp[is * ni + ii] = bx(is, mirror_index(ii, ni));
        }
      }
    }
    for (Complex& a : amp) a *= scale;
  } else {
    fft::centered_rows(amp, ns, ni);
    double scale = std::sqrt(bx.idler_axis().pitch() / out_axis.pitch());
    for (Complex& a : amp) a *= scale;
  }
  return BiphotonAxis(bx.signal_axis(), out_axis, bx.wavelength(), std::move(amp));
}

Conditional condition_signal(const BiphotonAxis& bx, const IdlerOptics& optics, double u) {
  Axis d = detection_axis(bx, optics);
  std::size_t ns = bx.signal_axis().size();
  std::size_t ni = bx.idler_axis().size();
  Conditional out;
  out.amplitude.assign(ns, Complex{});
  if (!(std::abs(u) <= d.extent() / 2.0)) return out;
  std::vector<Complex> c = detection_mode(bx, optics, u);
  long double power = 0.0L;
  for (std::size_t is = 0; is < ns; ++is) {
    const Complex* row = bx.amplitudes().data() + is * ni;
    Complex acc{};
    for (std::size_t ii = 0; ii < ni; ++ii) acc += row[ii] * c[ii];
    out.amplitude[is] = acc;
    power += std::norm(acc);
  }
  out.density = static_cast<double>(power) * bx.signal_axis().pitch();
  if (out.density > 0.0) {
    double scale = 1.0 / std::sqrt(out.density);
    for (Complex& a : out.amplitude) a *= scale;
  }
  return out;
}

HeraldedMixture herald_mixture(const BiphotonAxis& bx, const BiphotonAxis& by,
                               const IdlerOptics& optics, const PointDetector& d2) {
  if (!(d2.pinhole_radius > 0.0) || !std::isfinite(d2.pinhole_radius)) {
    throw DomainError("D2 pinhole radius must be positive");
  }
  double px = detection_axis(bx, optics).pitch();
  double py = detection_axis(by, optics).pitch();
  long ax = static_cast<long>(std::floor(d2.pinhole_radius / px));
  long ay = static_cast<long>(std::floor(d2.pinhole_radius / py));

  HeraldedMixture mix{bx.signal_axis(), by.signal_axis(), {}, {}, {}, 0.0};
  std::vector<double> dx, dy;
  for (long a = -ax; a <= ax; ++a) {
    Conditional c = condition_signal(bx, optics, d2.x + static_cast<double>(a) * px);
    mix.x_states.push_back(std::move(c.amplitude));
    dx.push_back(c.density);
  }
  for (long b = -ay; b <= ay; ++b) {
    Conditional c = condition_signal(by, optics, d2.y + static_cast<double>(b) * py);
    mix.y_states.push_back(std::move(c.amplitude));
    dy.push_back(c.density);
  }

  if (ax == 0 && ay == 0) {
    double p = dx[0] * dy[0] * kPi * d2.pinhole_radius * d2.pinhole_radius;
    mix.herald_probability = p;
    if (p > 0.0) mix.components.push_back({p, 0, 0});
  } else {
    double r2 = d2.pinhole_radius * d2.pinhole_radius;
    for (long a = -ax; a <= ax; ++a) {
      for (long b = -ay; b <= ay; ++b) {
        double ux = static_cast<double>(a) * px;
        double uy = static_cast<double>(b) * py;
        if (ux * ux + uy * uy > r2 * (1.0 + 1e-12)) continue;
        double w = dx[static_cast<std::size_t>(a + ax)] * dy[static_cast<std::size_t>(b + ay)] * px * py;
        if (w <= 0.0) continue;
        mix.components.push_back(
            {w, static_cast<std::size_t>(a + ax), static_cast<std::size_t>(b + ay)});
        mix.herald_probability += w;
      }
    }
  }
  if (!(mix.herald_probability >= kHeraldMissThreshold)) {
    throw HeraldMissError(fmt::format("herald probability {:.3g} at D2 ({:g}, {:g}) m is below {:g}",
                                      mix.herald_probability, d2.x, d2.y, kHeraldMissThreshold),
                          mix.herald_probability);
  }
  for (auto& c : mix.components) c.weight /= mix.herald_probability;
  return mix;
}

ScalarField herald_signal(const BiphotonAxis& bx, const BiphotonAxis& by,
                          const IdlerOptics& optics, const DetectorSpec& d2) {
  const auto* point = std::get_if<PointDetector>(&d2);
  if (point == nullptr) throw DomainError("heralding needs a point detector at D2");
  if (bx.signal_axis().pitch() != by.signal_axis().pitch()) {
    throw DomainError("x and y signal axes must share one pitch");
  }
  Conditional cx = condition_signal(bx, optics, point->x);
  Conditional cy = condition_signal(by, optics, point->y);
  double p = cx.density * cy.density * kPi * point->pinhole_radius * point->pinhole_radius;
  if (!(p >= kHeraldMissThreshold)) {
    throw HeraldMissError(fmt::format("herald probability {:.3g} at D2 ({:g}, {:g}) m is below {:g}",
                                      p, point->x, point->y, kHeraldMissThreshold),
                          p);
  }
  Grid grid(bx.signal_axis().size(), by.signal_axis().size(), bx.signal_axis().pitch());
  ScalarField out(grid);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) out(ix, iy) = cx.amplitude[ix] * cy.amplitude[iy];
  }
  return out;
}

double conditional_width(const BiphotonAxis& bx, const IdlerOptics& optics, double x_detect) {
  Conditional c = condition_signal(bx, optics, x_detect);
  double p = c.density * detection_axis(bx, optics).pitch();
  if (!(p >= kHeraldMissThreshold)) {
    throw HeraldMissError(fmt::format("herald probability {:.3g} at D2 x = {:g} m is below {:g}", p,
                                      x_detect, kHeraldMissThreshold),
                          p);
  }
  return conditional_rms(bx.signal_axis(), c.amplitude);
}

double schmidt_number(const BiphotonAxis& bx) {
  std::size_t ns = bx.signal_axis().size();
  std::size_t ni = bx.idler_axis().size();
  std::vector<double> rows(ns, 0.0), cols(ni, 0.0);
  bool real = true;
  for (std::size_t is = 0; is < ns; ++is) {
    for (std::size_t ii = 0; ii < ni; ++ii) {
      Complex a = bx(is, ii);
      double w = std::norm(a);
      rows[is] += w;
      cols[ii] += w;
      if (a.imag() != 0.0) real = false;
    }
  }
  auto support = [](const std::vector<double>& m) {
    double peak = *std::max_element(m.begin(), m.end());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] > 1e-20 * peak) keep.push_back(k);
    }
    return keep;
  };
  std::vector<std::size_t> rs = support(rows), cs = support(cols);
  if (rows.empty() || rs.empty()) throw UndefinedReadoutError("biphoton amplitude is zero");

  Eigen::VectorXd sv;
  if (real) {
    Eigen::MatrixXd m(rs.size(), cs.size());
    for (std::size_t r = 0; r < rs.size(); ++r) {
      for (std::size_t c = 0; c < cs.size(); ++c) m(r, c) = bx(rs[r], cs[c]).real();
    }
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  } else {
    Eigen::MatrixXcd m(rs.size(), cs.size());
    for (std::size_t r = 0; r < rs.size(); ++r) {
      for (std::size_t c = 0; c < cs.size(); ++c) m(r, c) = bx(rs[r], cs[c]);
    }
    sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  }
  Eigen::ArrayXd lambda = sv.array().square();
  double total = lambda.sum();
  return total * total / lambda.square().sum();
}

double schmidt_number(const BiphotonAxis& bx, const BiphotonAxis& by) {
  return schmidt_number(bx) * schmidt_number(by);
}

void write_biphoton(std::ostream& out, const BiphotonAxis& bx) {
  std::size_t ns = bx.signal_axis().size();
  std::size_t ni = bx.idler_axis().size();
  if (bx.signal_axis().pitch() != bx.idler_axis().pitch()) {
    throw DomainError("PHIF1 export needs equal signal and idler pitches");
  }
  std::vector<Complex> data(ns * ni);
  for (std::size_t ii = 0; ii < ni; ++ii) {
    for (std::size_t is = 0; is < ns; ++is) data[ii * ns + is] = bx(is, ii);
  }
  write_phif(out, ns, ni, bx.signal_axis().pitch(), data);
}

}  // namespace heralded
