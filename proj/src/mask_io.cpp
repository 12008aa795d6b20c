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

#include "heralded/mask_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "heralded/errors.hpp"

namespace heralded {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr unsigned kMaxval = 65535;

// Whitespace-separated PGM tokens with '#' comments; comments are handed to
// `on_comment`.
class PgmTokens {
 public:
  explicit PgmTokens(std::istream& in) : in_(in) {}

  template <class F>
  bool next(std::string& token, F&& on_comment) {
    token.clear();
    char c;
    while (in_.get(c)) {
      if (c == '#') {
        std::string line;
        std::getline(in_, line);
        ++line_;
        on_comment(line);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        if (!token.empty()) return true;
      } else {
        token.push_back(c);
      }
    }
    return !token.empty();
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

}  // namespace

void write_mask_pgm(std::ostream& out, const PhaseMask& mask) {
  fmt::print(out, "P2\n# cell_pixels {}\n# pixel_pitch {:.17g}\n{} {}\n{}\n", mask.cell_pixels(),
             mask.pixel_pitch(), mask.cols(), mask.rows(), kMaxval);
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    for (std::size_t j = 0; j < mask.cols(); ++j) {
      auto value = static_cast<unsigned>(std::lround(mask.phase(i, j) / kTwoPi * kMaxval));
      fmt::print(out, "{}{}", j == 0 ? "" : " ", value);
    }
    out << '\n';
  }
}

PhaseMask read_mask_pgm(std::istream& in) {
  std::size_t cell_pixels = 1;
  double pixel_pitch = 8e-6;
  PgmTokens tokens(in);
  auto on_comment = [&](const std::string& text) {
    std::istringstream ss(text);
    std::string key;
    ss >> key;
    if (key == "cell_pixels") {
      if (!(ss >> cell_pixels)) throw FormatError("bad cell_pixels comment in mask file");
    } else if (key == "pixel_pitch") {
      if (!(ss >> pixel_pitch)) throw FormatError("bad pixel_pitch comment in mask file");
    }
  };
  std::string token;
  auto number = [&](const char* what) {
    if (!tokens.next(token, on_comment)) {
      throw FormatError(fmt::format("mask file truncated at line {}: expected {}", tokens.line(), what));
    }
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw FormatError(fmt::format("mask file line {}: expected {}, got '{}'", tokens.line(), what, token));
    }
    return value;
  };

  if (!tokens.next(token, on_comment) || token != "P2") {
    throw FormatError("mask file is not a plain graymap (missing P2 magic)");
  }
  unsigned long cols = number("width");
  unsigned long rows = number("height");
  unsigned long maxval = number("maxval");
  if (cols == 0 || rows == 0 || cols > (1u << 20) || rows > (1u << 20)) {
    throw FormatError(fmt::format("mask dimensions {}x{} out of range", cols, rows));
  }
  if (maxval == 0 || maxval > kMaxval) throw FormatError(fmt::format("mask maxval {} out of range", maxval));

  std::vector<double> phases(rows * cols);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    unsigned long v = number("cell value");
    if (v > maxval) {
      throw FormatError(fmt::format("mask file line {}: value {} exceeds maxval {}", tokens.line(), v, maxval));
    }
    double phi = static_cast<double>(v) / static_cast<double>(maxval) * kTwoPi;
    phases[k] = phi >= kTwoPi ? 0.0 : phi;
  }
  if (tokens.next(token, on_comment)) {
    throw FormatError(fmt::format("mask file line {}: trailing data '{}'", tokens.line(), token));
  }
  try {
    return PhaseMask(rows, cols, std::move(phases), cell_pixels, pixel_pitch);
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid mask geometry: ") + e.what());
  }
}

void write_mask_csv(std::ostream& out, const PhaseMask& mask) {
  out << "i,j,phi\n";
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    for (std::size_t j = 0; j < mask.cols(); ++j) fmt::print(out, "{},{},{:.17g}\n", i, j, mask.phase(i, j));
  }
}

}  // namespace heralded
