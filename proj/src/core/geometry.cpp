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

#include "core/geometry.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace sonoloc {

std::vector<std::pair<int, int>> MicArray::pairs() const {
  std::vector<std::pair<int, int>> out;
  const int m = mic_count();
  out.reserve(pair_count());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) out.emplace_back(i, j);
  return out;
}

double MicArray::max_pair_distance() const {
  double best = 0.0;
  for (const auto& [i, j] : pairs())
    best = std::max(best, (positions[j] - positions[i]).norm());
  return best;
}

int MicArray::geometry_class(double tol) const {
  bool flat = true, linear = true;
  for (const auto& p : positions) {
    if (std::abs(p.z()) > tol) flat = false;
    if (std::abs(p.y()) > tol || std::abs(p.z()) > tol) linear = false;
  }
  if (linear) return 1;
  if (flat) return 2;
  return 3;
}

namespace {

MicArray make_array(const std::string& name,
                    std::initializer_list<std::array<double, 3>> cm) {
  MicArray a;
  a.name = name;
  for (const auto& p : cm)
    a.positions.emplace_back(p[0] / 100.0, p[1] / 100.0, p[2] / 100.0);
  return a;
}

void validate_array(const MicArray& a) {
  if (a.mic_count() < 2)
    throw std::runtime_error("array needs at least 2 microphones");
  for (const auto& p : a.positions)
    if (!p.allFinite()) throw std::runtime_error("non-finite mic position");
}

}  // namespace

bool is_preset_array(const std::string& name) {
  return name == "linear7" || name == "planar7" || name == "spatial7";
}

MicArray preset_array(const std::string& name) {
  if (name == "linear7")
    return make_array(name, {{-5.0, 0, 0},
                             {-3.3, 0, 0},
                             {-1.7, 0, 0},
                             {0, 0, 0},
                             {1.7, 0, 0},
                             {3.3, 0, 0},
                             {5.0, 0, 0}});
  if (name == "planar7")
    return make_array(name, {{0, 0, 0},
                             {5, 0, 0},
                             {2.5, 4.3, 0},
                             {-2.5, 4.3, 0},
                             {-5.0, 0, 0},
                             {-2.5, -4.3, 0},
                             {2.5, -4.3, 0}});
  if (name == "spatial7")
    return make_array(name, {{0, 0, 0},
                             {-5, 0, 0},
                             {5, 0, 0},
                             {0, -5, 0},
                             {0, 5, 0},
                             {0, 0, -5},
                             {0, 0, 5}});
  throw std::runtime_error("unknown array preset: " + name);
}

MicArray parse_array_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("array json: ") + e.what());
  }
  MicArray a;
  a.name = j.value("name", "custom");
  const std::string unit = j.value("unit", "m");
  double scale;
  if (unit == "m")
    scale = 1.0;
  else if (unit == "cm")
    scale = 0.01;
  else
    throw std::runtime_error("array json: unit must be \"cm\" or \"m\"");
  if (!j.contains("positions") || !j["positions"].is_array())
    throw std::runtime_error("array json: missing positions");
  for (const auto& p : j["positions"]) {
    if (!p.is_array() || p.size() != 3)
      throw std::runtime_error("array json: each position must be [x,y,z]");
    a.positions.emplace_back(scale * p[0].get<double>(),
                             scale * p[1].get<double>(),
                             scale * p[2].get<double>());
  }
  validate_array(a);
  return a;
}

namespace {

struct IcoMesh {
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh m;
  m.verts = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
             {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
             {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.verts) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

IcoMesh subdivide(int level) {
  if (level < 0) throw std::runtime_error("grid level must be >= 0");
  if (level > 6) throw std::runtime_error("grid level capped at 6");
  IcoMesh m = icosahedron();
  for (int l = 0; l < level; ++l) {
    // std::map keyed on sorted vertex indices keeps midpoint creation order
    // independent of face traversal details within a level
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d v = (m.verts[a] + m.verts[b]).normalized();
      m.verts.push_back(v);
      const int idx = static_cast<int>(m.verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int a = mid(f[0], f[1]);
      const int b = mid(f[1], f[2]);
      const int c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces = std::move(next);
  }
  return m;
}

}  // namespace

DoaGrid build_doa_grid(int level) {
  DoaGrid g;
  g.directions = subdivide(level).verts;
  return g;
}

std::vector<std::pair<int, int>> doa_grid_edges(int level) {
  const IcoMesh m = subdivide(level);
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& f : m.faces) {
    for (int e = 0; e < 3; ++e) {
      auto key = std::minmax(f[e], f[(e + 1) % 3]);
      if (!seen.emplace(key, true).second) continue;
      edges.push_back(key);
    }
  }
  return edges;
}

TdoaTable compute_tdoa(const MicArray& array, const DoaGrid& grid, double fs,
                       double c) {
  if (fs <= 0.0 || c <= 0.0)
    throw std::runtime_error("fs and c must be positive");
  const auto pairs = array.pairs();
  const int P = static_cast<int>(pairs.size());
  const int Q = grid.size();
  TdoaTable t;
  t.fs = fs;
  t.c = c;
  t.tau.resize(P, Q);
  t.tau_rounded.resize(P, Q);
  for (int p = 0; p < P; ++p) {
    const Eigen::Vector3d d =
        array.positions[pairs[p].second] - array.positions[pairs[p].first];
    for (int q = 0; q < Q; ++q) {
      const double tau = fs / c * d.dot(grid.directions[q]);
      t.tau(p, q) = tau;
      t.tau_rounded(p, q) = round_tdoa(tau);
    }
  }
  return t;
}

std::vector<std::vector<int>> build_neighbor_sets(const DoaGrid& grid,
                                                  double delta_theta) {
  if (delta_theta <= 0.0 || delta_theta >= M_PI)
    throw std::runtime_error("delta_theta must be in (0, pi)");
  const int Q = grid.size();
  const double min_dot = std::cos(delta_theta);
  std::vector<std::vector<int>> sets(Q);
  for (int q = 0; q < Q; ++q) {
    for (int x = 0; x < Q; ++x)
      if (grid.directions[x].dot(grid.directions[q]) >= min_dot)
        sets[q].push_back(x);
  }
  return sets;
}

NullRangeTable build_null_ranges(
    const TdoaTable& tdoa, const std::vector<std::vector<int>>& neighbors) {
  const int P = static_cast<int>(tdoa.tau.rows());
  const int Q = static_cast<int>(tdoa.tau.cols());
  if (static_cast<int>(neighbors.size()) != Q)
    throw std::runtime_error("neighbor sets built from a different grid");
  NullRangeTable r;
  r.tau_min.resize(P, Q);
  r.tau_max.resize(P, Q);
  for (int p = 0; p < P; ++p) {
    for (int q = 0; q < Q; ++q) {
      double lo = tdoa.tau(p, q), hi = lo;
      for (int x : neighbors[q]) {
        lo = std::min(lo, tdoa.tau(p, x));
        hi = std::max(hi, tdoa.tau(p, x));
      }
      r.tau_min(p, q) = static_cast<int>(std::floor(lo));
      r.tau_max(p, q) = static_cast<int>(std::ceil(hi));
    }
  }
  return r;
}

}  // namespace sonoloc
