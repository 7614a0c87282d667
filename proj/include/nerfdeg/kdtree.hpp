// Copyright 2026 The nerfdeg Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "nerfdeg/geometry.hpp"

namespace nerfdeg {

/// Squared Euclidean distance, written out so every caller rounds identically.
inline double squared_distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

struct Neighbor {
  std::size_t index = 0;
  double distance2 = std::numeric_limits<double>::infinity();
};

/// Exact 3D nearest-neighbour index. Ties resolve to the smallest point index,
/// so results match a first-minimum linear scan point for point.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(points_.size());
    if (!points_.empty()) build(0, order_.size(), 0);
  }

  std::size_t size() const noexcept { return points_.size(); }

  Neighbor nearest(const Vec3& query) const {
    Neighbor best;
    if (!nodes_.empty()) search(0, query, best);
    return best;
  }

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t begin, std::size_t end, int depth) {
    if (begin >= end) return -1;
    const int axis = depth % 3;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       const double pa = points_[a][axis];
                       const double pb = points_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({order_[mid], axis, -1, -1});
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid + 1, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void search(int id, const Vec3& q, Neighbor& best) const {
    const Node& node = nodes_[id];
    const double d2 = squared_distance(q, points_[node.point]);
    if (d2 < best.distance2 || (d2 == best.distance2 && node.point < best.index)) {
      best = {node.point, d2};
    }
    const double diff = q[node.axis] - points_[node.point][node.axis];
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    if (near >= 0) search(near, q, best);
    // <= keeps equal-distance candidates on the far side reachable for the tie rule.
    if (far >= 0 && diff * diff <= best.distance2) search(far, q, best);
  }

  std::vector<Vec3> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace nerfdeg
