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

#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonoloc {

double doa_azimuth(const Eigen::Vector3d& x) {
  return std::atan2(x.x(), std::sqrt(x.y() * x.y() + x.z() * x.z()));
}

Eigen::Vector3d project_doa(const Eigen::Vector3d& x, int beta) {
  if (std::abs(x.norm() - 1.0) > 1e-6)
    throw std::runtime_error("project_doa: direction must be unit length");
  switch (beta) {
    case 1: {
      const double g = doa_azimuth(x);
      return {std::cos(g), std::sin(g), 0.0};
    }
    case 2:
      return {x.x(), x.y(), std::abs(x.z())};
    case 3:
      return x;
    default:
      throw std::runtime_error("project_doa: geometry class must be 1, 2, 3");
  }
}

std::vector<double> frame_error(const ScanResult& estimates,
                                const std::vector<Eigen::Vector3d>& truths,
                                int beta) {
  std::vector<double> phi(truths.size(), M_PI);
  if (estimates.items.empty()) return phi;
  for (size_t t = 0; t < truths.size(); ++t) {
    const Eigen::Vector3d ct = project_doa(truths[t], beta);
    double best = M_PI;
    for (const auto& item : estimates.items) {
      const Eigen::Vector3d dr = project_doa(item.doa, beta);
      const double dot = std::clamp(dr.dot(ct), -1.0, 1.0);
      best = std::min(best, std::acos(dot));
    }
    phi[t] = best;
  }
  return phi;
}

double rmse(const ErrorRecord& rec) {
  if (rec.phi.empty()) throw std::runtime_error("rmse: no frames");
  const size_t t_count = rec.phi.front().size();
  if (t_count == 0) throw std::runtime_error("rmse: no sources");
  double acc = 0.0;
  for (const auto& row : rec.phi) {
    if (row.size() != t_count) throw std::runtime_error("rmse: ragged record");
    for (double v : row) acc += v * v;
  }
  return std::sqrt(acc / (static_cast<double>(rec.phi.size()) *
                          static_cast<double>(t_count)));
}

}  // namespace sonoloc
