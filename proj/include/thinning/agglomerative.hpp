#pragma once

#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "thinning/core.hpp"

/// @file agglomerative.hpp
/// Bottom-up thinning: start from singletons and repeatedly unify the two
/// closest subsets whenever their union is collapsable. The result is a
/// partition into collapsable subsets no two of which can be unified.

namespace thinning {

namespace detail {

/// Rounds to 12 significant decimal digits (round-trip through the shortest
/// such decimal). Distance-matrix entries are stored through this filter so
/// that pairs whose true separations are equal decimal numbers compare equal
/// instead of inheriting parse noise from their coordinates; see the
/// DistanceMatrix notes below for why this is safe.
inline double round_12_digits(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::strtod(buf, nullptr);
}

}  // namespace detail

/// Symmetric matrix of pairwise subset-centroid distances with an infinite
/// sentinel marking pairs whose unification has been tested and refuted.
///
/// Entries are written when first computed and are deliberately left in
/// place across later merges, so a value may lag behind the current
/// centroids (it is then the distance between centroids of earlier-stage
/// subsets of the two current clusters). Lagging values stay valid for the
/// termination cutoff: if the union of two clusters were collapsable, every
/// centroid of a subset of that union would lie within distance 1 of the
/// union's centroid, so any stored value above 2 still certifies that the
/// pair cannot be unified. Sentinels are refilled with current distances
/// whenever a merge changes one of their two subsets, so a surviving
/// sentinel always refers to a pair that failed the test in exactly its
/// current form.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> cells;  // n*n, kept symmetric

  static double sentinel() { return std::numeric_limits<double>::infinity(); }

  double at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    cells[i * n + j] = v;
    cells[j * n + i] = v;
  }
};

enum class AaOutcome { merged, rejected, done };

struct AaStep {
  AaOutcome outcome;
  std::size_t lhs = static_cast<std::size_t>(-1);  // surviving slot on merge
  std::size_t rhs = static_cast<std::size_t>(-1);  // removed / sentinelled slot
};

/// Merge-loop state. Slots are never physically erased: a dead slot keeps
/// its index so that slot ids stay aligned with the matrix, and comparing
/// two live slot ids orders them exactly like their positions in the
/// shrinking subset list (deletion preserves relative order).
struct AaState {
  PointSet input;
  std::vector<IndexSet> subsets;  // per slot, members sorted ascending
  std::vector<Point> centroids;   // per slot
  std::vector<char> alive;
  std::size_t alive_count = 0;
  DistanceMatrix matrix;

  // Cached minimum of each matrix row over live columns to its right,
  // with the smallest attaining column. npos/infinity when none.
  std::vector<double> row_min;
  std::vector<std::size_t> row_arg;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

namespace detail {

inline void aa_recompute_row(AaState& st, std::size_t i) {
  double best = DistanceMatrix::sentinel();
  std::size_t arg = AaState::npos;
  for (std::size_t j = i + 1; j < st.matrix.n; ++j) {
    if (!st.alive[j]) continue;
    const double v = st.matrix.at(i, j);
    if (v < best) {
      best = v;
      arg = j;
    }
  }
  st.row_min[i] = best;
  st.row_arg[i] = arg;
}

}  // namespace detail

inline AaState aa_init(const PointSet& ps) {
  detail::require(ps.size() > 0, "aa: input must be non-empty");
  AaState st;
  st.input = ps;
  const std::size_t s = ps.size();
  st.subsets.resize(s);
  st.centroids.resize(s);
  st.alive.assign(s, 1);
  st.alive_count = s;
  for (std::size_t i = 0; i < s; ++i) {
    st.subsets[i] = {i};
    st.centroids[i] = ps.points[i];
  }
  st.matrix.n = s;
  st.matrix.cells.assign(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      st.matrix.set(i, j,
                    detail::round_12_digits(detail::weighted_distance_2(
                        st.centroids[i], st.centroids[j], ps.tol)));
    }
  }
  st.row_min.resize(s);
  st.row_arg.resize(s);
  for (std::size_t i = 0; i < s; ++i) detail::aa_recompute_row(st, i);
  return st;
}

/// The live subsets in slot order.
inline Partition aa_partition(const AaState& st) {
  Partition part;
  part.subsets.reserve(st.alive_count);
  for (std::size_t i = 0; i < st.subsets.size(); ++i) {
    if (st.alive[i]) part.subsets.push_back(st.subsets[i]);
  }
  return part;
}

/// One iteration of the merge loop.
///
/// Picks the lexicographically smallest pair attaining the matrix minimum.
/// If no live pair has an entry <= 2 (or one subset remains) the loop is
/// done: no remaining pair can be unified. Otherwise the candidate centroid
/// q = (|L|q_l + |R|q_r)/(|L|+|R|) is tested against every member of the
/// union at full precision; on success the pair merges into the left slot,
/// on failure the entry becomes the sentinel.
inline AaStep aa_merge_step(AaState& st) {
  if (st.alive_count <= 1) return {AaOutcome::done};

  double best = DistanceMatrix::sentinel();
  std::size_t bi = AaState::npos;
  for (std::size_t i = 0; i < st.matrix.n; ++i) {
    if (!st.alive[i]) continue;
    if (st.row_min[i] < best) {
      best = st.row_min[i];
      bi = i;
    }
  }
  if (bi == AaState::npos || best > 2.0) return {AaOutcome::done};
  const std::size_t bj = st.row_arg[bi];
  detail::internal_check(bj != AaState::npos && st.alive[bj], "aa: stale row cache");

  const IndexSet& left = st.subsets[bi];
  const IndexSet& right = st.subsets[bj];
  const double m = static_cast<double>(left.size());
  const double k = static_cast<double>(right.size());
  Point q(st.input.dim());
  for (std::size_t c = 0; c < q.size(); ++c) {
    q[c] = (m * st.centroids[bi][c] + k * st.centroids[bj][c]) / (m + k);
  }

  bool ok = true;
  for (const IndexSet* side : {&left, &right}) {
    for (std::size_t p : *side) {
      if (detail::weighted_distance_2(st.input.points[p], q, st.input.tol) > 1.0) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
  }

  if (!ok) {
    st.matrix.set(bi, bj, DistanceMatrix::sentinel());
    if (st.row_arg[bi] == bj) detail::aa_recompute_row(st, bi);
    return {AaOutcome::rejected, bi, bj};
  }

  // Merge right into left.
  IndexSet merged;
  merged.reserve(left.size() + right.size());
  std::merge(left.begin(), left.end(), right.begin(), right.end(),
             std::back_inserter(merged));
  st.subsets[bi] = std::move(merged);
  st.subsets[bj].clear();
  st.centroids[bi] = q;
  st.alive[bj] = 0;
  --st.alive_count;

  // The merged slot's subsets changed: refill its sentinels with current
  // distances. Other entries keep their (possibly lagging) values.
  for (std::size_t c = 0; c < st.matrix.n; ++c) {
    if (!st.alive[c] || c == bi) continue;
    const std::size_t lo = std::min(bi, c), hi = std::max(bi, c);
    if (st.matrix.at(lo, hi) == DistanceMatrix::sentinel()) {
      const double fresh = detail::round_12_digits(detail::weighted_distance_2(
          st.centroids[bi], st.centroids[c], st.input.tol));
      st.matrix.set(lo, hi, fresh);
      if (c < bi && fresh < st.row_min[c]) {
        st.row_min[c] = fresh;
        st.row_arg[c] = bi;
      }
    }
  }
  detail::aa_recompute_row(st, bi);
  for (std::size_t r = 0; r < bj; ++r) {
    if (st.alive[r] && st.row_arg[r] == bj) detail::aa_recompute_row(st, r);
  }
  return {AaOutcome::merged, bi, bj};
}

/// Runs the full merge loop. With `trace`, records the partition at start
/// and after every merge. Representatives are recomputed from the member
/// lists on exit, so they satisfy the centroid determinism contract exactly.
inline ThinningResult aa_run(const PointSet& ps, std::vector<Partition>* trace = nullptr) {
  AaState st = aa_init(ps);
  if (trace) trace->push_back(aa_partition(st));
  for (;;) {
    const AaStep step = aa_merge_step(st);
    if (step.outcome == AaOutcome::done) break;
    if (step.outcome == AaOutcome::merged && trace) trace->push_back(aa_partition(st));
  }
  ThinningResult result;
  result.partition = aa_partition(st);
  result.representatives.reserve(result.partition.size());
  for (const IndexSet& sub : result.partition.subsets) {
    result.representatives.push_back(centroid(sub, ps));
    detail::internal_check(is_collapsable(sub, ps), "aa: produced a non-collapsable subset");
  }
  return result;
}

}  // namespace thinning
