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
#include <numeric>
#include <string>
#include <vector>

#include "nerfdeg/error.hpp"
#include "nerfdeg/geometry.hpp"
#include "nerfdeg/kdtree.hpp"
#include "nerfdeg/parallel.hpp"

namespace nerfdeg {

/// A cost involving an empty intersection set has no meaning.
class UndefinedCostError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Sum over points of `from` of the squared distance to the nearest point of `to`.
inline double directed_cost(const IntersectionSet& from, const KdTree& to_index) {
  if (from.points.empty() || to_index.size() == 0) {
    throw UndefinedCostError("matching cost is undefined for an empty intersection set");
  }
  double cost = 0.0;
  for (const Vec3& p : from.points) cost += to_index.nearest(p).distance2;
  return cost;
}

inline double directed_cost(const IntersectionSet& from, const IntersectionSet& to) {
  return directed_cost(from, KdTree(to.points));
}

/// Directed and mutual matching costs between every pair of views.
struct ViewMatchTable {
  std::size_t n_views = 0;
  std::vector<int> view_ids;               ///< view id of each row/column
  std::vector<std::vector<double>> directed;  ///< directed[i][j] = C(i -> j)
  std::vector<std::vector<double>> mutual;    ///< mutual[i][j] = C(i -> j) + C(j -> i)

  std::size_t position_of(int view_id) const {
    const auto it = std::find(view_ids.begin(), view_ids.end(), view_id);
    detail::require(it != view_ids.end(), "unknown view id " + std::to_string(view_id));
    return static_cast<std::size_t>(it - view_ids.begin());
  }
};

inline ViewMatchTable mutual_cost_table(const std::vector<IntersectionSet>& sets,
                                        unsigned jobs = 1) {
  const std::size_t n = sets.size();
  ViewMatchTable table;
  table.n_views = n;
  for (const auto& s : sets) table.view_ids.push_back(s.view_id);
  table.directed.assign(n, std::vector<double>(n, 0.0));
  table.mutual.assign(n, std::vector<double>(n, 0.0));
  for (const auto& s : sets) {
    if (s.points.empty()) {
      throw UndefinedCostError("view " + std::to_string(s.view_id) +
                               " has no ray hitting the scene sphere");
    }
  }

  std::vector<KdTree> indices;
  indices.reserve(n);
  for (const auto& s : sets) indices.emplace_back(s.points);

  // One row per work item; each row writes only its own entries.
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) table.directed[i][j] = directed_cost(sets[i], indices[j]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = table.directed[i][j] + table.directed[j][i];
      table.mutual[i][j] = m;
      table.mutual[j][i] = m;
    }
  }
  return table;
}

struct Selection {
  int target = 0;
  std::vector<int> references;
  std::vector<double> costs;  ///< mutual cost of each reference to the target
};

inline constexpr int kDefaultReferenceCount = 2;

/// The k views with the lowest mutual cost to `target_id`, ties broken by
/// smaller view id. `candidates`, when non-empty, restricts the pool.
inline Selection select_references(const ViewMatchTable& table, int target_id,
                                   int k = kDefaultReferenceCount,
                                   const std::vector<int>& candidates = {}) {
  detail::require(k >= 0, "reference count must be non-negative");
  detail::require(static_cast<std::size_t>(k) < table.n_views,
                  "reference count must be smaller than the number of views");
  const std::size_t t = table.position_of(target_id);
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < table.n_views; ++j) {
    if (j == t) continue;
    const int id = table.view_ids[j];
    if (!candidates.empty() && std::find(candidates.begin(), candidates.end(), id) == candidates.end()) {
      continue;
    }
    pool.push_back(j);
  }
  detail::require(pool.size() >= static_cast<std::size_t>(k),
                  "not enough candidate views for " + std::to_string(k) + " references");
  std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
    const double ca = table.mutual[t][a];
    const double cb = table.mutual[t][b];
    return ca < cb || (ca == cb && table.view_ids[a] < table.view_ids[b]);
  });
  Selection sel;
  sel.target = target_id;
  for (int r = 0; r < k; ++r) {
    sel.references.push_back(table.view_ids[pool[r]]);
    sel.costs.push_back(table.mutual[t][pool[r]]);
  }
  return sel;
}

/// Intersections for every view followed by the full cost table.
inline ViewMatchTable build_match_table(const std::vector<CameraView>& views,
                                        const SceneSphere& sphere, int grid = kDefaultRayGrid,
                                        unsigned jobs = 1) {
  std::vector<IntersectionSet> sets;
  sets.reserve(views.size());
  for (const auto& v : views) sets.push_back(shoot_intersections(v, sphere, grid));
  return mutual_cost_table(sets, jobs);
}

}  // namespace nerfdeg
