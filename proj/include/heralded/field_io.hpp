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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "heralded/field.hpp"

namespace heralded {

// PHIF1 container, all little-endian:
//   5 bytes  magic "PHIF1"
//   uint64   n_x
//   uint64   n_y
//   float64  pitch (meters)
//   n_x * n_y pairs of float64 (re, im), row-major, x fastest
struct PhifBlock {
  std::uint64_t nx = 0;
  std::uint64_t ny = 0;
  double pitch = 0.0;
  std::vector<Complex> data;
};

void write_phif(std::ostream& out, std::uint64_t nx, std::uint64_t ny, double pitch,
                std::span<const Complex> data);
PhifBlock read_phif(std::istream& in);

void write_field(std::ostream& out, const ScalarField& field);
ScalarField read_field(std::istream& in);

/// Text dump with header "x,y,re,im", one row per sample.
void write_field_csv(std::ostream& out, const ScalarField& field);

}  // namespace heralded
