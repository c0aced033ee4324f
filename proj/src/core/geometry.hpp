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

#ifndef SONOLOC_CORE_GEOMETRY_HPP_
#define SONOLOC_CORE_GEOMETRY_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sonoloc {

// Microphone positions in meters, relative to the array center.
struct MicArray {
  std::vector<Eigen::Vector3d> positions;
  std::string name;

  int mic_count() const { return static_cast<int>(positions.size()); }
  int pair_count() const { return mic_count() * (mic_count() - 1) / 2; }

  // Lexicographic (i, j) with i < j, 0-based. Pair order fixes the layout of
  // every per-pair table and of the stacked observation vector.
  std::vector<std::pair<int, int>> pairs() const;

  double max_pair_distance() const;

  // 1 = collinear on the x axis, 2 = planar in z = 0, 3 = general.
  int geometry_class(double tol = 1e-9) const;
};

// Built-in geometries: "linear7", "planar7", "spatial7".
MicArray preset_array(const std::string& name);
bool is_preset_array(const std::string& name);

// Parses {"name": ..., "unit": "cm"|"m", "positions": [[x,y,z], ...]}.
// Throws std::runtime_error on malformed input.
MicArray parse_array_json(const std::string& json_text);

// Unit-norm scan directions.
struct DoaGrid {
  std::vector<Eigen::Vector3d> directions;

  int size() const { return static_cast<int>(directions.size()); }
};

// Geodesic sphere by recursive icosahedron subdivision with midpoint
// projection; 10*4^level + 2 vertices. Ordering is deterministic: the 12
// base vertices first, then midpoints in cache-insertion order, so a given
// level always yields the same point list. Levels above 6 are rejected.
DoaGrid build_doa_grid(int level);

// Undirected edges of the subdivided icosahedron at the given level.
// Vertex indices match build_doa_grid ordering. Used for grid-resolution
// bounds (max angular step between adjacent scan points).
std::vector<std::pair<int, int>> doa_grid_edges(int level);

// Per (pair, direction) time differences of arrival in samples:
//   tau[p][q] = fs / c * (r_j - r_i) . s_q
struct TdoaTable {
  Eigen::MatrixXd tau;          // P x Q, fractional samples
  Eigen::MatrixXi tau_rounded;  // P x Q, round half up
  double fs = 0.0;
  double c = 0.0;
};

TdoaTable compute_tdoa(const MicArray& array, const DoaGrid& grid, double fs,
                       double c);

// For each direction q, the set of grid indices within delta_theta of it
// (q itself always included).
std::vector<std::vector<int>> build_neighbor_sets(const DoaGrid& grid,
                                                  double delta_theta);

// Per (pair, direction) integer lag interval [floor(min tau), ceil(max tau)]
// over the direction's neighbor set.
struct NullRangeTable {
  Eigen::MatrixXi tau_min;  // P x Q
  Eigen::MatrixXi tau_max;  // P x Q
  double delta_theta = 0.0;
};

NullRangeTable build_null_ranges(const TdoaTable& tdoa,
                                 const std::vector<std::vector<int>>& neighbors);

// round half up, ties toward +inf
inline int round_tdoa(double tau) {
  return static_cast<int>(std::floor(tau + 0.5));
}

}  // namespace sonoloc

#endif  // SONOLOC_CORE_GEOMETRY_HPP_
