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

#include <iosfwd>

#include "heralded/slm.hpp"

namespace heralded {

// Plain-text graymap (P2), one value per cell, maxval 65535,
// value = round(phi / 2pi * 65535). Cell geometry travels in comment lines
// "# cell_pixels <n>" and "# pixel_pitch <meters>".
void write_mask_pgm(std::ostream& out, const PhaseMask& mask);

/// Throws FormatError on malformed input or values above maxval.
PhaseMask read_mask_pgm(std::istream& in);

/// "i,j,phi" rows in cell order.
void write_mask_csv(std::ostream& out, const PhaseMask& mask);

}  // namespace heralded
