// Copyright 2026 The Sonoloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace sonoloc {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
  if (n <= 0) throw std::runtime_error("fft size must be positive");
  real_buf_ = fftw_alloc_real(n);
  cplx_in_ = fftw_alloc_complex(n);
  cplx_out_ = fftw_alloc_complex(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_r2c_ = fftw_plan_dft_r2c_1d(
      n, real_buf_, static_cast<fftw_complex*>(cplx_out_), FFTW_ESTIMATE);
  plan_c2c_ = fftw_plan_dft_1d(n, static_cast<fftw_complex*>(cplx_in_),
                               static_cast<fftw_complex*>(cplx_out_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
  plan_c2r_ = fftw_plan_dft_c2r_1d(
      n, static_cast<fftw_complex*>(cplx_in_), real_buf_, FFTW_ESTIMATE);
  if (!plan_r2c_ || !plan_c2c_ || !plan_c2r_)
    throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  fftw_free(real_buf_);
  fftw_free(cplx_in_);
  fftw_free(cplx_out_);
}

void Fft::forward_real(std::span<const double> in,
                       std::span<std::complex<double>> out) {
  if (static_cast<int>(in.size()) != n_ ||
      static_cast<int>(out.size()) < n_ / 2 + 1)
    throw std::runtime_error("forward_real: bad buffer size");
  std::memcpy(real_buf_, in.data(), n_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_r2c_));
  std::memcpy(out.data(), cplx_out_, (n_ / 2 + 1) * sizeof(fftw_complex));
}

void Fft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) {
  if (static_cast<int>(out.size()) != n_)
    throw std::runtime_error("backward: bad buffer size");
  const int m = static_cast<int>(in.size());
  if (m > n_) throw std::runtime_error("backward: input longer than N");
  std::memcpy(cplx_in_, in.data(), m * sizeof(fftw_complex));
  std::memset(static_cast<fftw_complex*>(cplx_in_) + m, 0,
              (n_ - m) * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(plan_c2c_));
  std::memcpy(out.data(), cplx_out_, n_ * sizeof(fftw_complex));
}

void Fft::backward_real(std::span<const std::complex<double>> in,
                        std::span<double> out) {
  if (static_cast<int>(in.size()) != n_ / 2 + 1 ||
      static_cast<int>(out.size()) != n_)
    throw std::runtime_error("backward_real: bad buffer size");
  std::memcpy(cplx_in_, in.data(), (n_ / 2 + 1) * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(plan_c2r_));
  std::memcpy(out.data(), real_buf_, n_ * sizeof(double));
}

}  // namespace sonoloc
