#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

/// @file core.hpp
/// Shared geometry kernel for tolerance-aware point thinning: weighted
/// norms, centroids, the collapsability test, and central sums of squares.
///
/// All operations are pure functions of their inputs; the types are plain
/// value objects and safe to share between threads.

namespace thinning {

/// Thrown when an internal consistency check fails. This signals a bug in
/// the library, not bad user input (which raises std::invalid_argument).
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Point = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

inline void internal_check(bool ok, const char* what) {
  if (!ok) throw internal_error(what);
}

/// Running sum used by every centroid / sum-of-squares accumulation.
/// Plain summation by default so results are a deterministic function of
/// accumulation order; defining THINNING_COMPENSATED_SUMMATION switches to
/// Kahan summation at the cost of changing last-ulp results.
struct Accumulator {
  double sum = 0.0;
#ifdef THINNING_COMPENSATED_SUMMATION
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
#else
  void add(double v) { sum += v; }
#endif
};

}  // namespace detail

/// Positive per-coordinate error bounds, shared by all points of a set.
/// Component i rescales coordinate i: distances are taken after dividing
/// each coordinate difference by eps[i].
struct Tolerance {
  std::vector<double> eps;

  Tolerance() = default;
  explicit Tolerance(std::vector<double> e) : eps(std::move(e)) { validate(); }

  /// Broadcasts one scalar bound to every coordinate.
  static Tolerance uniform(std::size_t dim, double e) {
    return Tolerance(std::vector<double>(dim, e));
  }

  std::size_t dim() const { return eps.size(); }

  void validate() const {
    detail::require(!eps.empty(), "Tolerance: dimension must be at least 1");
    for (double e : eps) {
      detail::require(std::isfinite(e) && e > 0.0,
                      "Tolerance: every component must be positive and finite");
    }
  }
};

/// An ordered list of points with one common tolerance. Duplicate points are
/// legitimate (repeat measurements) and keep their distinct indices.
struct PointSet {
  std::vector<Point> points;
  Tolerance tol;

  PointSet() = default;
  PointSet(std::vector<Point> pts, Tolerance t)
      : points(std::move(pts)), tol(std::move(t)) {
    for (const Point& p : points) {
      detail::require(p.size() == tol.dim(),
                      "PointSet: point dimension does not match tolerance");
      for (double c : p) {
        detail::require(std::isfinite(c), "PointSet: coordinates must be finite");
      }
    }
  }

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return tol.dim(); }
};

/// Disjoint, non-empty index subsets covering {0,...,s-1}.
struct Partition {
  std::vector<IndexSet> subsets;

  std::size_t size() const { return subsets.size(); }
};

/// A partition together with the centroid of each subset, index-aligned.
struct ThinningResult {
  Partition partition;
  std::vector<Point> representatives;
};

/// Geometry used by the sum-of-squares objective. `weighted` measures in the
/// tolerance-rescaled space, `unweighted` in plain Euclidean coordinates.
enum class NormMode { weighted, unweighted };

/// sqrt(sum_i (v[i]/eps[i])^2).
inline double weighted_norm_2(const Point& v, const Tolerance& tol) {
  detail::require(v.size() == tol.dim(), "weighted_norm_2: dimension mismatch");
  detail::Accumulator acc;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = v[i] / tol.eps[i];
    acc.add(w * w);
  }
  return std::sqrt(acc.sum);
}

/// max_i |v[i]|/eps[i].
inline double weighted_norm_inf(const Point& v, const Tolerance& tol) {
  detail::require(v.size() == tol.dim(), "weighted_norm_inf: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    m = std::max(m, std::abs(v[i]) / tol.eps[i]);
  }
  return m;
}

namespace detail {

inline double weighted_distance_2(const Point& p, const Point& q, const Tolerance& tol) {
  Accumulator acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = (p[i] - q[i]) / tol.eps[i];
    acc.add(w * w);
  }
  return std::sqrt(acc.sum);
}

/// Squared point-to-point distance in the geometry selected by `mode`.
inline double squared_distance(const Point& p, const Point& q, const Tolerance& tol,
                               NormMode mode) {
  Accumulator acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double w = p[i] - q[i];
    if (mode == NormMode::weighted) w /= tol.eps[i];
    acc.add(w * w);
  }
  return acc.sum;
}

inline void check_indices(const IndexSet& indices, std::size_t s, const char* who) {
  require(!indices.empty(), who);
  for (std::size_t i : indices) {
    require(i < s, "index out of range");
  }
}

}  // namespace detail

/// Coordinatewise mean of the selected points. Accumulation always runs in
/// ascending index order, so the result is bit-reproducible for a given
/// index set regardless of the order it is handed in.
inline Point centroid(const IndexSet& indices, const PointSet& ps) {
  detail::check_indices(indices, ps.size(), "centroid: empty index set");
  const IndexSet* idx = &indices;
  IndexSet sorted;
  if (!std::is_sorted(indices.begin(), indices.end())) {
    sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    idx = &sorted;
  }
  const std::size_t n = ps.dim();
  std::vector<detail::Accumulator> acc(n);
  for (std::size_t i : *idx) {
    const Point& p = ps.points[i];
    for (std::size_t k = 0; k < n; ++k) acc[k].add(p[k]);
  }
  Point q(n);
  const double count = static_cast<double>(idx->size());
  for (std::size_t k = 0; k < n; ++k) q[k] = acc[k].sum / count;
  return q;
}

/// True iff every selected point lies within weighted distance 1 of the
/// subset's centroid. The comparison is a non-strict exact IEEE <=.
inline bool is_collapsable(const IndexSet& indices, const PointSet& ps) {
  detail::check_indices(indices, ps.size(), "is_collapsable: empty index set");
  const Point q = centroid(indices, ps);
  for (std::size_t i : indices) {
    if (detail::weighted_distance_2(ps.points[i], q, ps.tol) > 1.0) return false;
  }
  return true;
}

/// True iff r lies in the closed unit ball around p in the weighted 2-norm,
/// i.e. r is a value empirically indistinguishable from p.
inline bool in_neighborhood(const Point& r, const Point& p, const Tolerance& tol) {
  detail::require(r.size() == p.size(), "in_neighborhood: dimension mismatch");
  detail::require(r.size() == tol.dim(), "in_neighborhood: dimension mismatch");
  return detail::weighted_distance_2(p, r, tol) <= 1.0;
}

/// Sum of squared distances of the selected points to their centroid, in
/// the geometry selected by `mode`.
inline double central_ssq(const IndexSet& indices, const PointSet& ps, NormMode mode) {
  detail::check_indices(indices, ps.size(), "central_ssq: empty index set");
  const Point q = centroid(indices, ps);
  const IndexSet* idx = &indices;
  IndexSet sorted;
  if (!std::is_sorted(indices.begin(), indices.end())) {
    sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    idx = &sorted;
  }
  detail::Accumulator acc;
  for (std::size_t i : *idx) {
    acc.add(detail::squared_distance(ps.points[i], q, ps.tol, mode));
  }
  return acc.sum;
}

/// Raises std::invalid_argument unless `part` is a partition of {0,...,s-1}
/// into non-empty pairwise disjoint subsets.
inline void validate_partition(const Partition& part, std::size_t s) {
  std::vector<char> seen(s, 0);
  std::size_t covered = 0;
  for (const IndexSet& sub : part.subsets) {
    detail::require(!sub.empty(), "Partition: empty subset");
    for (std::size_t i : sub) {
      detail::require(i < s, "Partition: index out of range");
      detail::require(!seen[i], "Partition: index appears twice");
      seen[i] = 1;
      ++covered;
    }
  }
  detail::require(covered == s, "Partition: does not cover all indices");
}

/// Total central sum of squares of a partition: the sum of central_ssq over
/// its subsets.
inline double total_ssq(const Partition& part, const PointSet& ps, NormMode mode) {
  validate_partition(part, ps.size());
  detail::Accumulator acc;
  for (const IndexSet& sub : part.subsets) {
    acc.add(central_ssq(sub, ps, mode));
  }
  return acc.sum;
}

}  // namespace thinning
