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

#ifndef SONOLOC_TESTS_TEST_UTIL_HPP_
#define SONOLOC_TESTS_TEST_UTIL_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "core/geometry.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace sonoloc::testutil {

// One span per channel over the columns [start, start + frame) of a
// channels x samples matrix (rows must be contiguous: row-major storage
// is not assumed, so copy first).
inline std::vector<std::span<const double>> make_spans(
    const std::vector<std::vector<double>>& channels) {
  std::vector<std::span<const double>> spans;
  spans.reserve(channels.size());
  for (const auto& ch : channels) spans.emplace_back(ch.data(), ch.size());
  return spans;
}

inline std::vector<std::vector<double>> window_at(const Eigen::MatrixXd& audio,
                                                  int start, int frame) {
  std::vector<std::vector<double>> out(audio.rows());
  for (int m = 0; m < audio.rows(); ++m) {
    out[m].resize(frame);
    for (int i = 0; i < frame; ++i) out[m][i] = audio(m, start + i);
  }
  return out;
}

// Unit-modulus random phases in PhatVector layout.
inline PhatVector random_phat(int pairs, int bins, Rng& rng) {
  PhatVector x;
  x.bins = bins;
  x.flat.resize(static_cast<Eigen::Index>(pairs) * bins);
  for (Eigen::Index i = 0; i < x.flat.size(); ++i) {
    const double ph = rng.uniform(0.0, 2.0 * M_PI);
    x.flat[i] = std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return x;
}

// The observation an ideal far-field source at grid direction q produces:
// X_p[k] = e^{-2 pi i k tau[p][q] / N}.
inline PhatVector steering_phat(const TdoaTable& tdoa, int q, int frame_size,
                                bool rounded = false) {
  const int pairs = static_cast<int>(tdoa.tau.rows());
  const int bins = frame_size / 2 + 1;
  PhatVector x;
  x.bins = bins;
  x.flat.resize(static_cast<Eigen::Index>(pairs) * bins);
  for (int p = 0; p < pairs; ++p) {
    const double tau =
        rounded ? static_cast<double>(tdoa.tau_rounded(p, q)) : tdoa.tau(p, q);
    for (int k = 0; k < bins; ++k) {
      const double ph = -2.0 * M_PI * k * tau / frame_size;
      x.flat[static_cast<Eigen::Index>(p) * bins + k] =
          std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  return x;
}

inline double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double d = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(d);
}

}  // namespace sonoloc::testutil

#endif  // SONOLOC_TESTS_TEST_UTIL_HPP_
