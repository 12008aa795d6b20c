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

#include <stdexcept>
#include <string>

namespace heralded {

/// Argument outside the physical or mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sampling grid too small to hold the biphoton state.
class CoverageError : public std::runtime_error {
 public:
  CoverageError(const std::string& what, double captured)
      : std::runtime_error(what), captured_fraction(captured) {}

  double captured_fraction;
};

/// The heralding detector sees (numerically) no idler photons.
class HeraldMissError : public std::runtime_error {
 public:
  HeraldMissError(const std::string& what, double probability)
      : std::runtime_error(what), herald_probability(probability) {}

  double herald_probability;
};

/// A normalized readout was requested for zero total signal.
class UndefinedReadoutError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed file contents (PHIF1 containers, P2 masks).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heralded
