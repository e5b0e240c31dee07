#pragma once

#include <utility>
#include <vector>

#include "thinning/core.hpp"

/// @file divisive.hpp
/// Top-down thinning: start from one subset holding everything, repeatedly
/// split off the point worst represented by its subset's centroid, then
/// redistribute single points between subsets while the total central sum
/// of squares strictly decreases.

namespace thinning {

struct DaStats {
  std::size_t outer_iterations = 0;  // entries into the distance/stop check
  std::size_t splits = 0;
  std::size_t applied_moves = 0;
};

/// One (ssq before, ssq after) record per applied redistribution move.
using DaMoveLog = std::vector<std::pair<double, double>>;

/// Split-loop state. `distances` holds each point's weighted distance to its
/// owner's centroid and is refreshed by every mutating operation, so the
/// state is consistent between calls.
struct DaState {
  PointSet input;
  NormMode mode = NormMode::weighted;
  std::vector<IndexSet> subsets;     // members sorted ascending
  std::vector<Point> centroids;      // aligned with subsets
  std::vector<double> subset_ssq;    // aligned, in `mode` geometry
  std::vector<std::size_t> owner;    // point index -> subset index
  std::vector<double> distances;     // always the weighted 2-norm
};

namespace detail {

inline double da_subset_ssq(const IndexSet& members, const Point& c,
                            const PointSet& ps, NormMode mode) {
  Accumulator acc;
  for (std::size_t i : members) {
    acc.add(squared_distance(ps.points[i], c, ps.tol, mode));
  }
  return acc.sum;
}

inline void da_refresh_distances(DaState& st) {
  const std::size_t s = st.input.size();
  st.distances.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    st.distances[i] = weighted_distance_2(st.input.points[i],
                                          st.centroids[st.owner[i]], st.input.tol);
  }
}

inline void da_validate(const DaState& st) {
#ifndef NDEBUG
  for (std::size_t j = 0; j < st.subsets.size(); ++j) {
    internal_check(centroid(st.subsets[j], st.input) == st.centroids[j],
                   "da: cached centroid diverged from member list");
  }
#else
  (void)st;
#endif
}

}  // namespace detail

inline DaState da_init(const PointSet& ps, NormMode mode = NormMode::weighted) {
  detail::require(ps.size() > 0, "da: input must be non-empty");
  DaState st;
  st.input = ps;
  st.mode = mode;
  IndexSet all(ps.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  st.subsets.push_back(std::move(all));
  st.centroids.push_back(centroid(st.subsets[0], ps));
  st.subset_ssq.push_back(detail::da_subset_ssq(st.subsets[0], st.centroids[0], ps, mode));
  st.owner.assign(ps.size(), 0);
  detail::da_refresh_distances(st);
  return st;
}

/// Splits the worst represented point (largest entry of `distances`,
/// smallest index on ties) into a new singleton subset and recomputes its
/// former owner's centroid. Requires that some point exceeds distance 1.
inline std::size_t da_split(DaState& st) {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < st.distances.size(); ++i) {
    if (st.distances[i] > st.distances[worst]) worst = i;
  }
  detail::internal_check(st.distances[worst] > 1.0,
                         "da_split: every point is already within tolerance");
  const std::size_t from = st.owner[worst];
  IndexSet& members = st.subsets[from];
  detail::internal_check(members.size() > 1, "da_split: cannot split a singleton");
  members.erase(std::find(members.begin(), members.end(), worst));
  st.centroids[from] = centroid(members, st.input);
  st.subset_ssq[from] =
      detail::da_subset_ssq(members, st.centroids[from], st.input, st.mode);

  st.subsets.push_back({worst});
  st.centroids.push_back(st.input.points[worst]);
  st.subset_ssq.push_back(0.0);
  st.owner[worst] = st.subsets.size() - 1;
  detail::da_refresh_distances(st);
  detail::da_validate(st);
  return worst;
}

/// Local search over single-point moves. Every candidate (point p, target
/// subset k != owner(p)) is scored with the incremental formula
///
///   delta = |K|/(|K|+1) * d(p, c_K)^2  -  |A|/(|A|-1) * d(p, c_A)^2
///
/// (removal term 0 when A is a singleton, so emptying a subset never
/// improves). The best candidate (ties: smallest point index, then smallest
/// target index) is committed only if the freshly recomputed total strictly
/// decreases, which also guarantees termination. Returns the number of
/// applied moves; with `log`, records (total before, total after) per move.
inline std::size_t da_redistribute(DaState& st, DaMoveLog* log = nullptr) {
  std::size_t applied = 0;
  const std::size_t s = st.input.size();
  for (;;) {
    const std::size_t k = st.subsets.size();
    if (k < 2) break;

    detail::Accumulator total;
    for (double v : st.subset_ssq) total.add(v);
    const double before = total.sum;

    double best_delta = 0.0;
    std::size_t best_p = 0, best_t = 0;
    bool have = false;
    for (std::size_t p = 0; p < s; ++p) {
      const std::size_t a = st.owner[p];
      const double d_own =
          detail::squared_distance(st.input.points[p], st.centroids[a], st.input.tol, st.mode);
      const double ma = static_cast<double>(st.subsets[a].size());
      const double loss = (st.subsets[a].size() == 1) ? 0.0 : ma / (ma - 1.0) * d_own;
      for (std::size_t t = 0; t < k; ++t) {
        if (t == a) continue;
        const double mk = static_cast<double>(st.subsets[t].size());
        const double gain =
            mk / (mk + 1.0) *
            detail::squared_distance(st.input.points[p], st.centroids[t], st.input.tol, st.mode);
        const double delta = gain - loss;
        if (!have || delta < best_delta) {
          have = true;
          best_delta = delta;
          best_p = p;
          best_t = t;
        }
      }
    }
    if (!have) break;

    // Commit check against exactly recomputed sums.
    const std::size_t a = st.owner[best_p];
    IndexSet new_a = st.subsets[a];
    new_a.erase(std::find(new_a.begin(), new_a.end(), best_p));
    if (new_a.empty()) break;  // unreachable: the removal term is then 0
    IndexSet new_t = st.subsets[best_t];
    new_t.insert(std::upper_bound(new_t.begin(), new_t.end(), best_p), best_p);

    const Point ca = centroid(new_a, st.input);
    const Point ct = centroid(new_t, st.input);
    const double ssq_a = detail::da_subset_ssq(new_a, ca, st.input, st.mode);
    const double ssq_t = detail::da_subset_ssq(new_t, ct, st.input, st.mode);
    const double after =
        before - st.subset_ssq[a] - st.subset_ssq[best_t] + ssq_a + ssq_t;
    if (!(after < before)) break;

    st.subsets[a] = std::move(new_a);
    st.subsets[best_t] = std::move(new_t);
    st.centroids[a] = ca;
    st.centroids[best_t] = ct;
    st.subset_ssq[a] = ssq_a;
    st.subset_ssq[best_t] = ssq_t;
    st.owner[best_p] = best_t;
    ++applied;
    if (log) log->emplace_back(before, after);
    detail::da_validate(st);
  }
  detail::da_refresh_distances(st);
  return applied;
}

/// Runs the full split/redistribute loop. With `trace`, records the initial
/// partition and the partition after each redistribution phase.
inline ThinningResult da_run(const PointSet& ps, NormMode mode = NormMode::weighted,
                             std::vector<Partition>* trace = nullptr,
                             DaStats* stats = nullptr, DaMoveLog* log = nullptr) {
  DaState st = da_init(ps, mode);
  DaStats local;
  if (trace) trace->push_back(Partition{st.subsets});
  for (;;) {
    ++local.outer_iterations;
    double worst = 0.0;
    for (double d : st.distances) worst = std::max(worst, d);
    if (worst <= 1.0) break;
    da_split(st);
    ++local.splits;
    local.applied_moves += da_redistribute(st, log);
    if (trace) trace->push_back(Partition{st.subsets});
  }
  if (stats) *stats = local;

  ThinningResult result;
  result.partition.subsets = st.subsets;
  result.representatives.reserve(st.subsets.size());
  for (const IndexSet& sub : st.subsets) {
    result.representatives.push_back(centroid(sub, ps));
    detail::internal_check(is_collapsable(sub, ps), "da: produced a non-collapsable subset");
  }
  return result;
}

}  // namespace thinning
