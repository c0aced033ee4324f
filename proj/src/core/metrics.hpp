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

#ifndef SONOLOC_CORE_METRICS_HPP_
#define SONOLOC_CORE_METRICS_HPP_

#include <Eigen/Dense>
#include <vector>

#include "core/srp.hpp"

namespace sonoloc {

// Elevation-style angle used for 1-D arrays and the azimuth plots:
//   g(x) = atan2(x_x, sqrt(x_y^2 + x_z^2)), always in [-pi/2, pi/2].
double doa_azimuth(const Eigen::Vector3d& x);

// Geometry-aware projection before scoring, so ambiguities a given array
// cannot resolve are not counted as errors:
//   beta 1 (linear):  [cos g(x), sin g(x), 0]
//   beta 2 (planar):  [x, y, |z|]
//   beta 3 (full 3-D): x
// Rejects non-unit input and beta outside 1..3.
Eigen::Vector3d project_doa(const Eigen::Vector3d& x, int beta);

// Per true source, the minimum projected angular distance to any estimate;
// the arccos argument is clamped. No estimates scores pi for every source.
std::vector<double> frame_error(const ScanResult& estimates,
                                const std::vector<Eigen::Vector3d>& truths,
                                int beta);

// phi[l][t]: frame l, source t, all in [0, pi].
struct ErrorRecord {
  std::vector<std::vector<double>> phi;
  int beta = 3;
};

// sqrt(sum phi^2 / (L*T)); rejects empty or ragged records.
double rmse(const ErrorRecord& rec);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_METRICS_HPP_
