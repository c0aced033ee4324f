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

#ifndef SONOLOC_CORE_SPECTRAL_HPP_
#define SONOLOC_CORE_SPECTRAL_HPP_

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "core/fft.hpp"

namespace sonoloc {

enum class Window { kHann, kRect };

struct StftConfig {
  int frame_size = 512;  // N, must be even
  int hop_size = 128;
  double fs = 16000.0;
  Window window = Window::kHann;

  int bins() const { return frame_size / 2 + 1; }
  void validate() const;
};

// Windowed half-spectrum analysis of one multichannel frame. Owns the FFT
// plan; one instance per stream.
class Stft {
 public:
  explicit Stft(const StftConfig& cfg);

  // samples: one span of frame_size samples per channel.
  // Returns M x (N/2+1), spectrum(k) = sum_n w[n] x[n] e^{-2 pi i k n / N}.
  Eigen::MatrixXcd analyze(const std::vector<std::span<const double>>& samples);

  const std::vector<double>& window() const { return window_; }

 private:
  StftConfig cfg_;
  std::vector<double> window_;
  std::vector<double> scratch_;
  Fft fft_;
};

// Recursively smoothed cross-spectra, one row per microphone pair in
// lexicographic (i,j) order:
//   X_ij <- (1 - alpha) X_ij + alpha X_i conj(X_j)
class CrossSpectrumState {
 public:
  CrossSpectrumState(int mic_count, int bins, double alpha);

  void update(const Eigen::MatrixXcd& mic_spectra);
  void reset();

  const Eigen::MatrixXcd& xspec() const { return xspec_; }
  double alpha() const { return alpha_; }
  long frame_index() const { return frame_index_; }
  int pair_count() const { return static_cast<int>(xspec_.rows()); }

 private:
  Eigen::MatrixXcd xspec_;  // P x bins
  double alpha_;
  long frame_index_ = 0;
  int mic_count_;
};

// Phase transformed cross-spectra, unit modulus per bin (exact zero for
// degenerate bins below the modulus threshold). Stored flattened in the
// stacked-vector order: pair (0,1) bins 0..N/2, then (0,2), ..., (M-2,M-1).
struct PhatVector {
  Eigen::VectorXcd flat;
  int bins = 0;

  int pair_count() const {
    return bins == 0 ? 0 : static_cast<int>(flat.size()) / bins;
  }
  std::span<const std::complex<double>> pair(int p) const {
    return {flat.data() + static_cast<long>(p) * bins,
            static_cast<size_t>(bins)};
  }
};

// modulus threshold under which a bin is treated as degenerate
inline constexpr double kPhatEpsilon = 1e-12;

PhatVector phat_normalize(const CrossSpectrumState& state);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_SPECTRAL_HPP_
