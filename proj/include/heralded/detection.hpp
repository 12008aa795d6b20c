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

#include "heralded/field.hpp"
#include "heralded/spdc.hpp"

namespace heralded {

/// Coincidences at the transmitted (C+) and reflected (C-) PBS ports, either
/// counts or probabilities.
struct CoincidenceRecord {
  double c_plus = 0.0;
  double c_minus = 0.0;
};

/// Sum of |a|^2 over the samples inside the pinhole disc. Throws DomainError
/// for a bucket detector or a disc that misses the grid.
double point_rate(const ScalarField& field, const DetectorSpec& det);

/// Independent Poisson counts with means shots * p+/(p+ + p-) and
/// shots * p-/(p+ + p-), drawn from stream (seed, stream).
CoincidenceRecord sample_counts(double p_plus, double p_minus, double shots, std::uint64_t seed,
                                std::uint64_t stream = 0);

double c_plus_percent(const CoincidenceRecord& rec);

/// 100 - c_plus_percent(rec).
double c_minus_percent(const CoincidenceRecord& rec);

/// (C+ - C-) / (C+ + C-), computed as 2 * C+(%) / 100 - 1.
double visibility(const CoincidenceRecord& rec);

}  // namespace heralded
