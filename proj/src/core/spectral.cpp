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

#include "core/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace sonoloc {

void StftConfig::validate() const {
  if (frame_size <= 0 || frame_size % 2 != 0)
    throw std::runtime_error("frame size must be positive and even");
  if (hop_size <= 0 || hop_size > frame_size)
    throw std::runtime_error("hop must satisfy 0 < hop <= frame size");
  if (fs <= 0.0) throw std::runtime_error("sample rate must be positive");
}

Stft::Stft(const StftConfig& cfg) : cfg_(cfg), fft_(cfg.frame_size) {
  cfg_.validate();
  const int n = cfg_.frame_size;
  window_.resize(n);
  for (int i = 0; i < n; ++i) {
    window_[i] = cfg_.window == Window::kHann
                     ? 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n)
                     : 1.0;
  }
  scratch_.resize(n);
}

Eigen::MatrixXcd Stft::analyze(
    const std::vector<std::span<const double>>& samples) {
  const int m = static_cast<int>(samples.size());
  const int n = cfg_.frame_size;
  if (m == 0) throw std::runtime_error("stft: no channels");
  Eigen::MatrixXcd spectra(m, cfg_.bins());
  std::vector<std::complex<double>> out(cfg_.bins());
  for (int ch = 0; ch < m; ++ch) {
    if (static_cast<int>(samples[ch].size()) != n)
      throw std::runtime_error("stft: channel frame must have N samples");
    for (int i = 0; i < n; ++i) scratch_[i] = window_[i] * samples[ch][i];
    fft_.forward_real(scratch_, out);
    for (int k = 0; k < cfg_.bins(); ++k) spectra(ch, k) = out[k];
  }
  return spectra;
}

CrossSpectrumState::CrossSpectrumState(int mic_count, int bins, double alpha)
    : alpha_(alpha), mic_count_(mic_count) {
  if (mic_count < 2) throw std::runtime_error("need at least 2 channels");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::runtime_error("alpha must be in [0, 1]");
  const int pairs = mic_count * (mic_count - 1) / 2;
  xspec_ = Eigen::MatrixXcd::Zero(pairs, bins);
}

void CrossSpectrumState::reset() {
  xspec_.setZero();
  frame_index_ = 0;
}

void CrossSpectrumState::update(const Eigen::MatrixXcd& mic_spectra) {
  if (mic_spectra.rows() != mic_count_ || mic_spectra.cols() != xspec_.cols())
    throw std::runtime_error("cross-spectrum update: channel count mismatch");
  int p = 0;
  for (int i = 0; i < mic_count_; ++i) {
    for (int j = i + 1; j < mic_count_; ++j, ++p) {
      xspec_.row(p) = (1.0 - alpha_) * xspec_.row(p) +
                      alpha_ * mic_spectra.row(i).cwiseProduct(
                                   mic_spectra.row(j).conjugate());
    }
  }
  ++frame_index_;
}

PhatVector phat_normalize(const CrossSpectrumState& state) {
  const auto& x = state.xspec();
  PhatVector out;
  out.bins = static_cast<int>(x.cols());
  out.flat.resize(x.size());
  long idx = 0;
  for (long p = 0; p < x.rows(); ++p) {
    for (long k = 0; k < x.cols(); ++k, ++idx) {
      const std::complex<double> v = x(p, k);
      const double mag = std::abs(v);
      out.flat[idx] = mag < kPhatEpsilon ? 0.0 : v / mag;
    }
  }
  return out;
}

}  // namespace sonoloc
