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

#include "core/srp.hpp"

#include <stdexcept>

namespace sonoloc {

GccTensor gcc_phat(const PhatVector& phat, int frame_size, Fft& fft) {
  const int P = phat.pair_count();
  const int n = frame_size;
  if (phat.bins != n / 2 + 1)
    throw std::runtime_error("gcc_phat: phat bins do not match frame size");
  if (fft.size() != n)
    throw std::runtime_error("gcc_phat: fft size does not match frame size");
  GccTensor out;
  out.gcc.resize(P, n);
  std::vector<std::complex<double>> lags(n);
  for (int p = 0; p < P; ++p) {
    fft.backward(phat.pair(p), lags);
    for (int i = 0; i < n; ++i) out.gcc(p, i) = lags[i].real();
  }
  return out;
}

Eigen::VectorXd steered_power(const GccTensor& gcc, const TdoaTable& tdoa) {
  const int P = static_cast<int>(tdoa.tau_rounded.rows());
  const int Q = static_cast<int>(tdoa.tau_rounded.cols());
  const int n = gcc.lag_count();
  if (gcc.gcc.rows() != P)
    throw std::runtime_error("steered_power: pair count mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(Q);
  for (int p = 0; p < P; ++p) {
    for (int q = 0; q < Q; ++q) {
      int lag = tdoa.tau_rounded(p, q) % n;
      if (lag < 0) lag += n;
      y[q] += gcc.gcc(p, lag);
    }
  }
  return y;
}

void null_gcc(GccTensor& gcc, const NullRangeTable& ranges, int q_star) {
  const int P = static_cast<int>(ranges.tau_min.rows());
  if (q_star < 0 || q_star >= ranges.tau_min.cols())
    throw std::runtime_error("null_gcc: direction index out of range");
  const int n = gcc.lag_count();
  for (int p = 0; p < P; ++p) {
    const int lo = ranges.tau_min(p, q_star);
    const int hi = ranges.tau_max(p, q_star);
    if (hi - lo + 1 >= n) {
      gcc.gcc.row(p).setZero();
      continue;
    }
    for (int t = lo; t <= hi; ++t) {
      int lag = t % n;
      if (lag < 0) lag += n;
      gcc.gcc(p, lag) = 0.0;
    }
  }
}

ScanResult localize_srp(GccTensor& gcc, const TdoaTable& tdoa,
                        const NullRangeTable& ranges, const DoaGrid& grid,
                        int scans) {
  if (scans < 1) throw std::runtime_error("localize_srp: scans must be >= 1");
  const int Q = grid.size();
  if (tdoa.tau_rounded.cols() != Q || ranges.tau_min.cols() != Q)
    throw std::runtime_error("localize_srp: tables built from another grid");
  ScanResult result;
  result.items.reserve(scans);
  for (int r = 0; r < scans; ++r) {
    const Eigen::VectorXd y = steered_power(gcc, tdoa);
    int q_star = 0;
    for (int q = 1; q < Q; ++q)
      if (y[q] > y[q_star]) q_star = q;  // strict: ties keep lowest index
    null_gcc(gcc, ranges, q_star);
    result.items.push_back({grid.directions[q_star], y[q_star], false});
  }
  return result;
}

}  // namespace sonoloc
