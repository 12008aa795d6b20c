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

#include "heralded/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <tuple>
#include <vector>

namespace heralded::fft {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are built once per shape under a lock and reused.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // rank 1: `howmany` transforms of length `n1`; rank 2: one n0 x n1 transform.
  fftw_plan get(int rank, std::size_t n0, std::size_t n1, fftw_complex* buffer) {
    const auto key = std::make_tuple(rank, n0, n1);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = nullptr;
    if (rank == 1) {
      const int n = static_cast<int>(n1);
      plan = fftw_plan_many_dft(1, &n, static_cast<int>(n0), buffer, nullptr, 1, n, buffer,
                                nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buffer, buffer,
                              FFTW_FORWARD, FFTW_ESTIMATE);
    }
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, std::size_t>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// SIMD-aligned scratch so every execution of a cached plan takes the same
// code path regardless of where the caller's vector happens to live.
class AlignedBuffer {
 public:
  explicit AlignedBuffer(std::size_t n)
      : data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data_ == nullptr) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(data_); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;

  fftw_complex* raw() { return data_; }
  Complex* complex() { return reinterpret_cast<Complex*>(data_); }

 private:
  fftw_complex* data_;
};

void execute(int rank, std::size_t n0, std::size_t n1, AlignedBuffer& buf) {
  fftw_plan plan = plan_cache().get(rank, n0, n1, buf.raw());
  fftw_execute_dft(plan, buf.raw(), buf.raw());
}

}  // namespace

void centered_rows(std::span<Complex> data, std::size_t rows, std::size_t cols) {
  AlignedBuffer buf(rows * cols);
  Complex* b = buf.complex();
  const std::size_t half = cols / 2;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * cols;
    for (std::size_t k = 0; k < cols; ++k) b[base + (k + half) % cols] = data[base + k];
  }
  execute(1, rows, cols, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * cols;
    for (std::size_t k = 0; k < cols; ++k) data[base + k] = b[base + (k + half) % cols] * scale;
  }
}

void centered_2d(std::span<Complex> data, std::size_t ny, std::size_t nx) {
  AlignedBuffer buf(ny * nx);
  Complex* b = buf.complex();
  const std::size_t hx = nx / 2;
  const std::size_t hy = ny / 2;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const std::size_t row = ((iy + hy) % ny) * nx;
    for (std::size_t ix = 0; ix < nx; ++ix) b[row + (ix + hx) % nx] = data[iy * nx + ix];
  }
  execute(2, ny, nx, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(nx * ny));
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const std::size_t row = ((iy + hy) % ny) * nx;
    for (std::size_t ix = 0; ix < nx; ++ix) data[iy * nx + ix] = b[row + (ix + hx) % nx] * scale;
  }
}

void forward_2d(std::span<Complex> data, std::size_t ny, std::size_t nx) {
  AlignedBuffer buf(ny * nx);
  std::copy(data.begin(), data.end(), buf.complex());
  execute(2, ny, nx, buf);
  std::copy(buf.complex(), buf.complex() + ny * nx, data.begin());
}

void shift_2d(std::span<Complex> data, std::size_t ny, std::size_t nx) {
  std::vector<Complex> tmp(data.begin(), data.end());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      data[((iy + ny / 2) % ny) * nx + (ix + nx / 2) % nx] = tmp[iy * nx + ix];
    }
  }
}

}  // namespace heralded::fft
