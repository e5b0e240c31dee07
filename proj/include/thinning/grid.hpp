#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "thinning/core.hpp"

/// @file grid.hpp
/// Fast prefilter: bucket points into half-open axis-aligned cells of
/// weighted infinity-norm radius `radius` anchored at the origin, and
/// collapse each bucket to its centroid. For radius r every member ends up
/// within weighted infinity-distance 2r of its representative; the buckets
/// are generally NOT collapsable in the weighted 2-norm.

namespace thinning {

using CellIndex = std::vector<long long>;

/// The unique cell owning p: idx[i] = floor(p[i]/(2*radius*eps[i]) + 1/2),
/// i.e. cells are [c - r*eps, c + r*eps) per coordinate, closed below.
inline CellIndex grid_cell(const Point& p, const Tolerance& tol, double radius) {
  detail::require(std::isfinite(radius) && radius > 0.0, "grid_cell: radius must be positive");
  detail::require(p.size() == tol.dim(), "grid_cell: dimension mismatch");
  CellIndex idx(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double cell = std::floor(p[i] / (2.0 * radius * tol.eps[i]) + 0.5);
    detail::internal_check(std::abs(cell) < 9.0e18, "grid_cell: index overflow");
    idx[i] = static_cast<long long>(cell);
  }
  return idx;
}

/// Buckets the whole set. Subsets are emitted in ascending lexicographic
/// cell-index order with members ascending, so output is deterministic.
inline ThinningResult grid_partition(const PointSet& ps, double radius) {
  detail::require(ps.size() > 0, "grid_partition: input must be non-empty");
  std::map<CellIndex, IndexSet> cells;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    cells[grid_cell(ps.points[i], ps.tol, radius)].push_back(i);
  }
  ThinningResult result;
  result.partition.subsets.reserve(cells.size());
  result.representatives.reserve(cells.size());
  for (auto& [idx, members] : cells) {
    result.representatives.push_back(centroid(members, ps));
    result.partition.subsets.push_back(std::move(members));
  }
  return result;
}

}  // namespace thinning
