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

#ifndef SONOLOC_CORE_SRP_HPP_
#define SONOLOC_CORE_SRP_HPP_

#include <Eigen/Dense>
#include <vector>

#include "core/geometry.hpp"
#include "core/spectral.hpp"

namespace sonoloc {

// GCC-PHAT values per pair for all integer lags n in 0..N-1
// (negative lags wrap modulo N).
struct GccTensor {
  Eigen::MatrixXd gcc;  // P x N

  int lag_count() const { return static_cast<int>(gcc.cols()); }
};

// One direction estimate per scan.
struct ScanItem {
  Eigen::Vector3d doa;
  double energy = 0.0;
  // deflation hit an already-removed direction; estimate repeats an
  // earlier scan (svd path only)
  bool duplicate = false;
};

struct ScanResult {
  std::vector<ScanItem> items;
};

// gcc[p][n] = Re sum_{k=0}^{N/2} Xhat_p[k] e^{+2 pi i k n / N},
// evaluated with a zero-extended length-N inverse transform.
GccTensor gcc_phat(const PhatVector& phat, int frame_size, Fft& fft);

// Y[q] = sum_p gcc[p][ round(tau[p][q]) mod N ]
Eigen::VectorXd steered_power(const GccTensor& gcc, const TdoaTable& tdoa);

// Zeroes gcc entries at lags tau_min..tau_max (mod N) of q_star, every pair.
void null_gcc(GccTensor& gcc, const NullRangeTable& ranges, int q_star);

// Algorithm: R scans of argmax over Y with GCC nulling between scans.
// Mutates gcc. Argmax ties go to the lowest grid index.
ScanResult localize_srp(GccTensor& gcc, const TdoaTable& tdoa,
                        const NullRangeTable& ranges, const DoaGrid& grid,
                        int scans);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_SRP_HPP_
