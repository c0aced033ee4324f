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

#ifndef SONOLOC_CORE_ROOMSIM_HPP_
#define SONOLOC_CORE_ROOMSIM_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/geometry.hpp"
#include "core/rng.hpp"

namespace sonoloc {

struct RoomConfig {
  Eigen::Vector3d room = {10.0, 10.0, 3.0};  // meters
  double rt60_min = 0.2;
  double rt60_max = 0.5;
  int source_count = 1;
  double min_wall_dist = 0.5;       // sources and array center
  double min_source_dist = 0.5;     // source to array center
  double min_separation_deg = 30.0; // pairwise, seen from array center
  bool anechoic = false;
};

// One randomized experiment: a shoebox room, a posed array, and source
// positions honoring the distance and separation constraints.
struct Scenario {
  Eigen::Vector3d room;
  double rt60 = 0.0;
  bool anechoic = false;
  Eigen::Vector3d array_center;
  Eigen::Matrix3d array_rotation;  // array frame -> world frame
  std::vector<Eigen::Vector3d> source_positions;  // world frame
  std::uint64_t seed = 0;

  int source_count() const { return static_cast<int>(source_positions.size()); }

  // Unit direction toward source t in the array frame, the quantity the
  // localizer estimates.
  Eigen::Vector3d true_doa(int t) const;
};

// Deterministic per seed. Sampling order is part of the contract: rt60,
// array center, rotation (uniform via normalized gaussian quaternion), then
// sources front to back with incremental rejection. Throws after a bounded
// number of failed placement attempts.
Scenario generate_scenario(const RoomConfig& cfg, std::uint64_t seed);

// Microphone centers in the world frame for the posed array.
std::vector<Eigen::Vector3d> world_mic_positions(const Scenario& sc,
                                                 const MicArray& array);

struct Rir {
  std::vector<double> taps;
  double fs = 0.0;
};

// Shoebox image-method impulse response between one source and one mic,
// both in world coordinates. Images are enumerated per dimension out to the
// distance sound travels in 1.25 * rt60 and truncated to that radius;
// anechoic scenarios keep only the direct path. Each image contributes
// beta^(reflection count) / (4 pi d) through an 81-tap windowed-sinc
// fractional delay at d / c * fs samples.
Rir image_method_rir(const Scenario& sc, const Eigen::Vector3d& source,
                     const Eigen::Vector3d& mic, double fs, double c);

// Uniform wall reflection coefficient whose rendered image-method decay
// extrapolates to the requested rt60 (Schroeder -5 dB to -35 dB slope).
// Calibrated against the room shape; mean-rate inversions (Sabine, Eyring)
// render systematically long in non-cubic rooms.
double wall_reflection_coeff(const Eigen::Vector3d& room, double rt60,
                             double c);

// Normalizes each source signal to unit RMS, convolves it with its M RIRs,
// and sums per mic. Output is M x L with L the longest convolution.
Eigen::MatrixXd render_mixture(const Scenario& sc, const MicArray& array,
                               const std::vector<Eigen::VectorXd>& signals,
                               double fs, double c);

// Deterministic stand-in for recorded speech: band-limited noise with a
// syllable-rate amplitude envelope, unit RMS.
Eigen::VectorXd synth_speech_like(std::uint64_t seed, double duration,
                                  double fs);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_ROOMSIM_HPP_
