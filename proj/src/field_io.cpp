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

#include "heralded/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "heralded/errors.hpp"

namespace heralded {
namespace {

constexpr std::array<char, 5> kMagic = {'P', 'H', 'I', 'F', '1'};

// Cap on n_x * n_y accepted from a file header; guards the allocation below.
constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 30;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000000000FFull) << 56) | ((v & 0x000000000000FF00ull) << 40) |
        ((v & 0x0000000000FF0000ull) << 24) | ((v & 0x00000000FF000000ull) << 8) |
        ((v & 0x000000FF00000000ull) >> 8) | ((v & 0x0000FF0000000000ull) >> 24) |
        ((v & 0x00FF000000000000ull) >> 40) | ((v & 0xFF00000000000000ull) >> 56);
  }
  return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("PHIF1: truncated file");
  return to_little(v);
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_phif(std::ostream& out, std::uint64_t nx, std::uint64_t ny, double pitch,
                std::span<const Complex> data) {
  if (data.size() != nx * ny) throw DomainError("PHIF1: data size does not match dimensions");
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, nx);
  put_u64(out, ny);
  put_f64(out, pitch);
  for (const Complex& a : data) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
  if (!out) throw FormatError("PHIF1: write failed");
}

PhifBlock read_phif(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("PHIF1: bad magic");
  }
  PhifBlock block;
  block.nx = get_u64(in);
  block.ny = get_u64(in);
  block.pitch = get_f64(in);
  if (block.nx == 0 || block.ny == 0 || block.nx > kMaxSamples / block.ny) {
    throw FormatError(fmt::format("PHIF1: unreasonable dimensions {} x {}", block.nx, block.ny));
  }
  block.data.resize(block.nx * block.ny);
  for (Complex& a : block.data) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    a = Complex(re, im);
  }
  return block;
}

void write_field(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid();
  write_phif(out, g.nx(), g.ny(), g.pitch(), field.amplitudes());
}

ScalarField read_field(std::istream& in) {
  PhifBlock block = read_phif(in);
  try {
    return ScalarField(Grid(block.nx, block.ny, block.pitch), std::move(block.data));
  } catch (const DomainError& e) {
    throw FormatError(std::string("PHIF1: ") + e.what());
  }
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid();
  out << "x,y,re,im\n";
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const Complex a = field(ix, iy);
      out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g}\n", g.x(ix), g.y(iy), a.real(), a.imag());
    }
  }
}

}  // namespace heralded
