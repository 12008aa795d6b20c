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
#include <span>

#include "heralded/field.hpp"

// Unitary, DC-centred discrete Fourier transforms (forward sign, e^{-2 pi i km/n}).
// Centring is done by index rotation; the plain transform and the explicit
// shift are exposed so the equivalence can be checked bit for bit.
namespace heralded::fft {

/// In-place centred unitary DFT of every row of a rows x cols row-major block.
void centered_rows(std::span<Complex> data, std::size_t rows, std::size_t cols);

/// In-place centred unitary 2D DFT of an ny x nx row-major block.
void centered_2d(std::span<Complex> data, std::size_t ny, std::size_t nx);

/// In-place centred unitary DFT of a single sequence.
inline void centered_1d(std::span<Complex> data) { centered_rows(data, 1, data.size()); }

/// Unnormalized, uncentred forward 2D DFT (in place).
void forward_2d(std::span<Complex> data, std::size_t ny, std::size_t nx);

/// Swap half-spaces along both axes (fftshift; its own inverse for even sizes).
void shift_2d(std::span<Complex> data, std::size_t ny, std::size_t nx);

}  // namespace heralded::fft
