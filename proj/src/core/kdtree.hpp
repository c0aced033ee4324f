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

#ifndef SONOLOC_CORE_KDTREE_HPP_
#define SONOLOC_CORE_KDTREE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sonoloc {

// Exact nearest-neighbor index over a fixed set of real vectors.
//
// The tree stores row indices into the point matrix handed to build().
// Queries return the same answer as a brute-force scan, including the
// tie rule: among equidistant points the lowest row index wins.
class KdTree {
 public:
  KdTree() = default;

  // points: one point per row. The matrix is copied.
  void build(const Eigen::MatrixXd& points);

  // Returns the row index of the nearest stored point. dist2_out, if
  // non-null, receives the squared distance. Empty index returns -1.
  int query(const Eigen::VectorXd& q, double* dist2_out = nullptr) const;

  int size() const { return static_cast<int>(points_.rows()); }
  int dims() const { return static_cast<int>(points_.cols()); }

 private:
  struct Node {
    int axis = -1;        // split dimension, -1 for leaf
    double split = 0.0;   // split value (coordinate of the median point)
    int point = -1;       // row index stored at this node
    int left = -1;        // child node ids
    int right = -1;
  };

  int build_recursive(std::vector<int>& idx, int lo, int hi, int depth);
  void query_recursive(int node_id, const Eigen::VectorXd& q, int* best,
                       double* best_d2) const;

  Eigen::MatrixXd points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace sonoloc

#endif  // SONOLOC_CORE_KDTREE_HPP_
