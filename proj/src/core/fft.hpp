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

#ifndef SONOLOC_CORE_FFT_HPP_
#define SONOLOC_CORE_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace sonoloc {

// Thin FFTW wrapper. Plan creation is serialized internally (FFTW planner is
// not thread safe); execution on a plan's own buffers is. One instance per
// stream, not shared across threads.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }

  // out[k] = sum_n in[n] e^{-2 pi i k n / N}, k = 0..N/2
  void forward_real(std::span<const double> in,
                    std::span<std::complex<double>> out);

  // out[n] = sum_k in[k] e^{+2 pi i k n / N} (unnormalized), full length N
  void backward(std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out);

  // real-input/real-output pair for long convolutions;
  // backward_real is the unnormalized inverse of forward_real
  void backward_real(std::span<const std::complex<double>> in,
                     std::span<double> out);

 private:
  int n_;
  void* plan_r2c_;
  void* plan_c2c_;
  void* plan_c2r_;
  double* real_buf_;
  void* cplx_in_;
  void* cplx_out_;
};

}  // namespace sonoloc

#endif  // SONOLOC_CORE_FFT_HPP_
