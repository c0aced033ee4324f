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

#ifndef SONOLOC_CORE_SVDPHAT_HPP_
#define SONOLOC_CORE_SVDPHAT_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "core/geometry.hpp"
#include "core/kdtree.hpp"
#include "core/spectral.hpp"
#include "core/srp.hpp"

namespace sonoloc {

struct SvdModelConfig {
  int frame_size = 512;
  double fs = 16000.0;
  double c = 340.0;
  double delta = 1e-5;
  int grid_level = 4;
};

// Offline factorization of the steering supermatrix W ~= U S V^H, truncated
// to the smallest rank K whose kept energy reaches (1 - delta) of the total.
// Online work is a K-dim projection plus a nearest-neighbor lookup.
struct SvdPhatModel {
  MicArray array;
  DoaGrid grid;
  SvdModelConfig config;
  int rank = 0;               // K
  double energy_ratio = 0.0;  // kept sum of sigma^2 over Q*P*(N/2+1)
  Eigen::MatrixXcd v;         // P(N/2+1) x K, projection basis
  Eigen::MatrixXcd d;         // Q x K, dictionary U*S
  Eigen::MatrixXcd d_hat;     // Q x K, row-normalized dictionary
  KdTree nn;                  // exact NN over the d_hat embedding

  int bins() const { return config.frame_size / 2 + 1; }
  int flat_size() const {
    return array.pair_count() * bins();
  }

  // Rebuilds d_hat and the NN index from d. Rows of d_hat are embedded as
  // 2K real dims (Re, Im interleaved); queries embed conj(Zhat) so that the
  // closest stored row maximizes Re{sum_i Dhat_qi * Zhat_i}.
  void finalize();
};

// W is Q x P(N/2+1), W(q, p*(N/2+1)+k) = e^{+2 pi i k tau[p][q] / N} with the
// continuous (unrounded) TDOAs. Column blocks follow PhatVector order.
Eigen::MatrixXcd build_steering_matrix(const TdoaTable& tdoa, int frame_size);

// Builds the grid and TDOA table for the array, factorizes W, and selects
// the minimal rank. The heavy step; cache the result with save_model.
SvdPhatModel build_svd_model(const MicArray& array, const SvdModelConfig& cfg);

// Z = V^H X
Eigen::VectorXcd project_observation(const SvdPhatModel& model,
                                     const PhatVector& x);

struct NearestResult {
  int q_star = -1;
  double energy = 0.0;  // Re{sum_i D_{q*,i} Z_i}, from the unnormalized row
};

// Normalizes Z and queries the NN index. Zero-norm Z is the silent-frame
// case and yields nullopt; the caller emits nothing for the frame.
std::optional<NearestResult> nearest_doa(const SvdPhatModel& model,
                                         const Eigen::VectorXcd& z);

// Orthonormal basis of already-removed source directions, one frame's worth.
class DeflationState {
 public:
  explicit DeflationState(int dims) : basis_(dims, 0) {}

  // Gram-Schmidt of v against the basis, then removes the new direction
  // from z in place. Returns false and leaves basis and z unchanged when v
  // is numerically inside the current span.
  bool add_and_project(const Eigen::VectorXcd& v, Eigen::VectorXcd& z,
                       double tol = 1e-9);

  const Eigen::MatrixXcd& basis() const { return basis_; }
  int count() const { return static_cast<int>(basis_.cols()); }

 private:
  Eigen::MatrixXcd basis_;  // dims x r, orthonormal columns
};

// v_r = conj(D_{q*}). Returns true when the basis grew, false for a
// duplicate direction (z untouched).
bool deflate(DeflationState& state, const SvdPhatModel& model, int q_star,
             Eigen::VectorXcd& z);

// Algorithm: project once, then R rounds of NN search + deflation. A frame
// whose projection has zero norm yields an empty result; a zero projection
// after some scans truncates the result.
ScanResult localize_svd(const SvdPhatModel& model, const PhatVector& x,
                        int scans);

// Binary model cache, little-endian, versioned by magic. Throws
// std::runtime_error on IO failure or format mismatch.
void save_model(const SvdPhatModel& model, const std::string& path);
SvdPhatModel load_model(const std::string& path);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_SVDPHAT_HPP_
