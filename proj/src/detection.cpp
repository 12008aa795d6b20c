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

#include "heralded/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "heralded/errors.hpp"
#include "heralded/rng.hpp"

namespace heralded {

double point_rate(const ScalarField& field, const DetectorSpec& det) {
  const auto* point = std::get_if<PointDetector>(&det);
  if (point == nullptr) throw DomainError("point_rate needs a point detector");
  const double r = point->pinhole_radius;
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("pinhole radius must be positive");
  const Grid& g = field.grid();
  const double half = 0.5 * g.pitch();
  double nearest_x = std::clamp(point->x, g.x(0) - half, g.x(g.nx() - 1) + half);
  double nearest_y = std::clamp(point->y, g.y(0) - half, g.y(g.ny() - 1) + half);
  double dx = point->x - nearest_x;
  double dy = point->y - nearest_y;
  if (dx * dx + dy * dy >= r * r) throw DomainError("pinhole lies entirely outside the grid");

  const double r2 = r * r;
  long double sum = 0.0L;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    double y = g.y(iy) - point->y;
    if (y * y > r2) continue;
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      double x = g.x(ix) - point->x;
      if (x * x + y * y <= r2) sum += std::norm(field(ix, iy));
    }
  }
  return static_cast<double>(sum) * g.cell_area();
}

CoincidenceRecord sample_counts(double p_plus, double p_minus, double shots, std::uint64_t seed,
                                std::uint64_t stream) {
  if (!(shots >= 0.0) || !std::isfinite(shots)) throw DomainError("shots must be finite and non-negative");
  if (!(p_plus >= 0.0) || !(p_minus >= 0.0)) throw DomainError("port probabilities must be non-negative");
  double total = p_plus + p_minus;
  if (!(total > 0.0)) throw UndefinedReadoutError("cannot sample counts with zero total probability");
  CounterRng rng(seed, stream);
  auto draw = [&](double mean) -> double {
    if (!(mean > 0.0)) return 0.0;
    std::poisson_distribution<long long> poisson(mean);
    return static_cast<double>(poisson(rng));
  };
  CoincidenceRecord rec;
  rec.c_plus = draw(shots * p_plus / total);
  rec.c_minus = draw(shots * p_minus / total);
  return rec;
}

double c_plus_percent(const CoincidenceRecord& rec) {
  double total = rec.c_plus + rec.c_minus;
  if (!(total > 0.0)) throw UndefinedReadoutError("C+ percentage of an empty record");
  return 100.0 * rec.c_plus / total;
}

double c_minus_percent(const CoincidenceRecord& rec) { return 100.0 - c_plus_percent(rec); }

double visibility(const CoincidenceRecord& rec) { return 2.0 * c_plus_percent(rec) / 100.0 - 1.0; }

}  // namespace heralded
