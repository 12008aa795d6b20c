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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "heralded/errors.hpp"
#include "heralded/mask_io.hpp"
#include "heralded/slm.hpp"
#include "test_support.hpp"

using namespace heralded;

namespace {

constexpr double kPi = std::numbers::pi;

// Grid whose samples tile the mask cells exactly (2 samples per cell edge).
Grid tiling_grid(const PhaseMask& mask) {
  std::size_t n = 2;
  while (static_cast<double>(n) < 2.0 * static_cast<double>(std::max(mask.rows(), mask.cols()))) n *= 2;
  return Grid(n, n, mask.cell_size() / 2.0);
}

double pipeline_readout(const PhaseMask& mask) {
  const Grid g = tiling_grid(mask);
  PolarizedField pf = clip_to_mask(prepare_diagonal(plane_wave(g, 1.0)), mask);
  auto [h, v] = pbs_split(halfwave_rotate(modulate(pf, mask)));
  PortRates r = bucket_rates(h, v);
  return integral_readout(r.h, r.v);
}

std::size_t count_white(const PhaseMask& m) {
  std::size_t n = 0;
  for (double phi : m.phases()) n += phi == 0.0;
  return n;
}

}  // namespace

TEST_CASE("phase mask invariants and lookup") {
  CHECK_THROWS_AS(PhaseMask(0, 2, {}), DomainError);
  CHECK_THROWS_AS(PhaseMask(1, 1, {2.0 * kPi}), DomainError);
  CHECK_THROWS_AS(PhaseMask(1, 1, {-0.1}), DomainError);
  CHECK_THROWS_AS(PhaseMask(1, 2, {0.0}), DomainError);

  const PhaseMask m(2, 2, {0.0, 1.0, 2.0, 3.0}, 2, 8e-6);
  CHECK(m.width() == doctest::Approx(32e-6));
  CHECK(m.phase_at(-1e-6, -1e-6) == 0.0);
  CHECK(m.phase_at(1e-6, -1e-6) == 1.0);
  CHECK(m.phase_at(-1e-6, 1e-6) == 2.0);
  CHECK(m.phase_at(0.0, 0.0) == 3.0);
  CHECK(m.phase_at(-16e-6, -16e-6) == 0.0);
  CHECK(m.phase_at(15.9e-6, 15.9e-6) == 3.0);
  CHECK_FALSE(m.covers(16.1e-6, 0.0));
  CHECK(m.phase_at(20e-6, 0.0) == 0.0);
}

TEST_CASE("make_binary_mask") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    CHECK(count_white(make_binary_mask({2, 2, 0.5, RandomLayout{seed}})) == 2);
  }
  const PhaseMask a = make_binary_mask({10, 10, 0.3, RandomLayout{42}});
  const PhaseMask b = make_binary_mask({10, 10, 0.3, RandomLayout{42}});
  const PhaseMask c = make_binary_mask({10, 10, 0.3, RandomLayout{43}});
  CHECK(count_white(a) == 30);
  CHECK(std::equal(a.phases().begin(), a.phases().end(), b.phases().begin()));
  CHECK_FALSE(std::equal(a.phases().begin(), a.phases().end(), c.phases().begin()));
  for (double phi : a.phases()) CHECK((phi == 0.0 || phi == kPi));
  CHECK(white_fraction(a) == doctest::Approx(0.3));

  CHECK(count_white(make_binary_mask({3, 3, 0.3, RandomLayout{1}})) == 3);
  CHECK(count_white(make_binary_mask({4, 4, 0.1, RandomLayout{1}})) == 2);
  CHECK(count_white(make_binary_mask({1, 1, 1.0, RandomLayout{1}})) == 1);
  CHECK_THROWS_AS(make_binary_mask({2, 2, 1.5, RandomLayout{1}}), DomainError);

  SUBCASE("stripes") {
    const PhaseMask s = make_binary_mask({8, 3, 0.5, StripeLayout{1}});
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(s.phase(i, j) == (i % 2 == 0 ? 0.0 : kPi));
    }
    const PhaseMask s2 = make_binary_mask({8, 1, 0.5, StripeLayout{2}});
    CHECK(s2.phase(1, 0) == 0.0);
    CHECK(s2.phase(2, 0) == kPi);
    CHECK(s2.phase(4, 0) == 0.0);
  }
}

TEST_CASE("encode_function") {
  CHECK(encode_function(std::vector<double>(4, 1.0), 2, 2).phase(1, 1) == 0.0);
  CHECK(encode_function(std::vector<double>(4, 0.0), 2, 2).phase(0, 1) == doctest::Approx(kPi / 2));
  CHECK(encode_function(std::vector<double>(4, -1.0), 2, 2).phase(1, 0) == kPi);
  std::vector<double> bad{0.0, 0.5, 1.2, 0.0};
  try {
    encode_function(bad, 2, 2);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
  }
}

TEST_CASE("polarization stages") {
  std::mt19937_64 rng(3);
  const Grid g(16, 16, 4e-6);
  ScalarField f = heralded::testing::random_field(g, rng);
  f = Complex(1.0 / std::sqrt(total_power(f))) * f;

  const PolarizedField d = prepare_diagonal(f);
  CHECK(total_power(d.h()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(total_power(d.v()) == doctest::Approx(0.5).epsilon(1e-12));
  Complex inner{};
  for (std::size_t k = 0; k < g.size(); ++k) inner += std::conj(d.h().amplitudes()[k]) * d.v().amplitudes()[k];
  inner *= g.cell_area();
  CHECK(std::abs(inner.imag()) < 1e-12);
  CHECK(inner.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prepare_diagonal(ScalarField(g)).total_probability() == 0.0);

  const std::size_t cells = 4;
  std::vector<double> phases(cells * cells);
  for (double& p : phases) p = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  const PhaseMask mask(cells, cells, phases, 2, 8e-6);
  const PolarizedField m = modulate(d, mask);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ref = std::abs(d.h().amplitudes()[k]);
    CHECK(std::abs(std::abs(m.h().amplitudes()[k]) - ref) <= 1e-15 * ref);
    CHECK(m.v().amplitudes()[k] == d.v().amplitudes()[k]);
  }
  CHECK(total_power(m.h()) == doctest::Approx(0.5).epsilon(1e-12));
  const PolarizedField r = halfwave_rotate(m);
  CHECK(r.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  auto [ph, pv] = pbs_split(r);
  CHECK(total_power(ph) + total_power(pv) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("fixed phases") {
    auto uniform = [&](double phi) { return PhaseMask(cells, cells, std::vector<double>(cells * cells, phi), 2, 8e-6); };
    const PolarizedField zero = modulate(d, uniform(0.0));
    CHECK(heralded::testing::max_abs_diff(zero.h(), d.h()) == 0.0);
    const PolarizedField flip = modulate(d, uniform(kPi));
    CHECK(heralded::testing::max_abs_diff(flip.h(), Complex(-1.0) * d.h()) <= 1e-15 * heralded::testing::max_abs(d.h()));

    auto rotated = halfwave_rotate(d);
    CHECK(total_power(rotated.v()) < 1e-30);
    CHECK(total_power(rotated.h()) == doctest::Approx(1.0).epsilon(1e-12));
    auto dark = halfwave_rotate(flip);
    CHECK(total_power(dark.h()) < 1e-28);
    auto split = halfwave_rotate(modulate(d, uniform(kPi / 2)));
    CHECK(total_power(split.h()) == doctest::Approx(total_power(split.v())).epsilon(1e-12));
  }
}

TEST_CASE("bucket rates and integral readout on plane waves") {
  const PhaseMask half = make_binary_mask({8, 8, 0.5, RandomLayout{5}, 2});
  const Grid g = tiling_grid(half);
  auto rates = [&](const PhaseMask& m) {
    PolarizedField pf = clip_to_mask(prepare_diagonal(plane_wave(g, 1.0)), m);
    auto [h, v] = pbs_split(halfwave_rotate(modulate(pf, m)));
    return bucket_rates(h, v);
  };
  PortRates r = rates(half);
  CHECK(r.h == doctest::Approx(r.v).epsilon(1e-9));
  const PhaseMask white = make_binary_mask({8, 8, 1.0, RandomLayout{5}, 2});
  CHECK(rates(white).v < 1e-12);

  const PhaseMask p30 = make_binary_mask({10, 10, 0.3, RandomLayout{9}});
  CHECK(pipeline_readout(p30) == doctest::Approx(2 * 0.3 - 1).epsilon(1e-9));
  PortRates r30 = [&] {
    PolarizedField pf = clip_to_mask(prepare_diagonal(plane_wave(tiling_grid(p30), 1.0)), p30);
    auto [h, v] = pbs_split(halfwave_rotate(modulate(pf, p30)));
    return bucket_rates(h, v);
  }();
  CHECK(r30.h / (r30.h + r30.v) == doctest::Approx(0.30).epsilon(1e-9));

  CHECK(pipeline_readout(encode_function(std::vector<double>(64, 0.0), 8, 8)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

  std::vector<double> g_cos(64);
  double direct = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      g_cos[i * 8 + j] = std::cos(2 * kPi * static_cast<double>(j) / 8.0) * 0.5 + 0.25 * static_cast<double>(i) / 8.0;
      direct += g_cos[i * 8 + j];
    }
  }
  direct /= 64;
  CHECK(std::abs(pipeline_readout(encode_function(g_cos, 8, 8)) - direct) < 1e-9);

  CHECK_THROWS_AS(integral_readout(0.0, 0.0), UndefinedReadoutError);
  CHECK(integral_readout(3.0, 1.0) == 0.5);
}

TEST_CASE("dqc1_sigma_x") {
  const Dqc1Result id = dqc1_sigma_x(PhaseMask(3, 3, std::vector<double>(9, 0.0)));
  CHECK(id.sigma_x == 1.0);
  CHECK(id.normalization == doctest::Approx(1.0 / 9));
  CHECK(std::abs(dqc1_sigma_x(make_binary_mask({4, 4, 0.5, RandomLayout{11}})).sigma_x) < 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  std::vector<double> phases(100);
  for (double& p : phases) p = u(rng);
  double brute = 0;
  for (double p : phases) brute += std::cos(p) / 100.0;
  CHECK(std::abs(dqc1_sigma_x(PhaseMask(10, 10, phases)).sigma_x - brute) < 1e-12);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<double> ph(36);
    std::mt19937_64 r(seed);
    for (double& p : ph) p = u(r);
    CHECK(std::abs(dqc1_sigma_x(PhaseMask(6, 6, ph)).sigma_x) <= 1.0 + 1e-12);
  }
}

TEST_CASE("pipeline readout equals dqc1 for tiling masks") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> ph(n * n);
      for (double& p : ph) p = u(rng);
      const PhaseMask mask(n, n, ph, 3, 8e-6);
      CHECK(std::abs(pipeline_readout(mask) - dqc1_sigma_x(mask).sigma_x) < 1e-9);
    }
  }
}

TEST_CASE("mask files") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  std::vector<double> ph(12);
  for (double& p : ph) p = u(rng);
  const PhaseMask mask(3, 4, ph, 70, 8e-6);

  std::stringstream buf;
  write_mask_pgm(buf, mask);
  CHECK(buf.str().rfind("P2\n", 0) == 0);
  const PhaseMask back = read_mask_pgm(buf);
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 4);
  CHECK(back.cell_pixels() == 70);
  CHECK(back.pixel_pitch() == 8e-6);
  for (std::size_t k = 0; k < 12; ++k) {
    double d = std::remainder(back.phases()[k] - ph[k], 2.0 * kPi);
    CHECK(std::abs(d) <= kPi / 65535 + 1e-12);
  }

  std::stringstream binary;
  write_mask_pgm(binary, make_binary_mask({2, 2, 0.5, RandomLayout{3}}));
  CHECK(binary.str().find("32768") != std::string::npos);

  std::istringstream ok("P2\n# hand written\n2 1\n# mid comment\n65535\n0 65535\n");
  const PhaseMask wrapped = read_mask_pgm(ok);
  CHECK(wrapped.phase(0, 1) == 0.0);

  std::istringstream bad_magic("P5\n1 1\n255\n0\n");
  CHECK_THROWS_AS(read_mask_pgm(bad_magic), FormatError);
  std::istringstream too_big("P2\n1 1\n100\n101\n");
  CHECK_THROWS_AS(read_mask_pgm(too_big), FormatError);
  std::istringstream truncated("P2\n2 2\n65535\n1 2 3\n");
  CHECK_THROWS_AS(read_mask_pgm(truncated), FormatError);
  std::istringstream junk("P2\n1 1\n65535\nx\n");
  CHECK_THROWS_AS(read_mask_pgm(junk), FormatError);

  std::ostringstream csv;
  write_mask_csv(csv, PhaseMask(1, 2, {0.0, kPi}));
  CHECK(csv.str() == "i,j,phi\n0,0,0\n0,1,3.1415926535897931\n");
}
