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

#include "core/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sonoloc {

void KdTree::build(const Eigen::MatrixXd& points) {
  points_ = points;
  nodes_.clear();
  root_ = -1;
  const int n = static_cast<int>(points_.rows());
  if (n == 0) return;
  nodes_.reserve(n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  root_ = build_recursive(idx, 0, n, 0);
}

int KdTree::build_recursive(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int dims = static_cast<int>(points_.cols());
  // Split on the widest-spread dimension of this subset.
  int axis = 0;
  double best_spread = -1.0;
  for (int d = 0; d < dims; ++d) {
    double mn = points_(idx[lo], d), mx = mn;
    for (int i = lo + 1; i < hi; ++i) {
      const double v = points_(idx[i], d);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (mx - mn > best_spread) {
      best_spread = mx - mn;
      axis = d;
    }
  }
  std::sort(idx.begin() + lo, idx.begin() + hi, [&](int a, int b) {
    const double va = points_(a, axis), vb = points_(b, axis);
    if (va != vb) return va < vb;
    return a < b;
  });
  const int mid = lo + (hi - lo) / 2;
  Node node;
  node.axis = axis;
  node.point = idx[mid];
  node.split = points_(idx[mid], axis);
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build_recursive(idx, lo, mid, depth + 1);
  const int right = build_recursive(idx, mid + 1, hi, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

int KdTree::query(const Eigen::VectorXd& q, double* dist2_out) const {
  if (root_ < 0) return -1;
  if (q.size() != points_.cols())
    throw std::runtime_error("KdTree::query: dimension mismatch");
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  query_recursive(root_, q, &best, &best_d2);
  if (dist2_out) *dist2_out = best_d2;
  return best;
}

void KdTree::query_recursive(int node_id, const Eigen::VectorXd& q, int* best,
                             double* best_d2) const {
  const Node& node = nodes_[node_id];
  const int dims = static_cast<int>(points_.cols());
  // Partial-distance scan: once the running sum exceeds the incumbent the
  // point cannot win, not even on the tie rule.
  double d2 = 0.0;
  for (int d = 0; d < dims; ++d) {
    const double t = points_(node.point, d) - q[d];
    d2 += t * t;
    if (d2 > *best_d2) break;
  }
  if (d2 < *best_d2 || (d2 == *best_d2 && node.point < *best)) {
    *best = node.point;
    *best_d2 = d2;
  }
  const double diff = q[node.axis] - node.split;
  const int near = diff <= 0.0 ? node.left : node.right;
  const int far = diff <= 0.0 ? node.right : node.left;
  if (near >= 0) query_recursive(near, q, best, best_d2);
  // Equal axis distance can still hide an equidistant point with a lower
  // index, so prune only on strict excess.
  if (far >= 0 && diff * diff <= *best_d2)
    query_recursive(far, q, best, best_d2);
}

}  // namespace sonoloc
