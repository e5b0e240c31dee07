#pragma once

// Shared fixtures, reference implementations and generators for the test
// suites. Everything here is test-only and kept independent of the library
// internals it checks wherever that matters (the partition enumerator, the
// full-recompute reference, the brute-force move scan).

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "thinning/thinning.hpp"

namespace testsupport {

using thinning::IndexSet;
using thinning::Partition;
using thinning::Point;
using thinning::PointSet;
using thinning::Tolerance;

// ---------------------------------------------------------------------------
// Fixtures

inline PointSet twelve_points() {
  return PointSet({{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {0, 0}, {1, 0},
                   {-1, 1}, {0, 1}, {1, 1}, {5, -2.9}, {5, 0}, {5, 2.9}},
                  Tolerance({1.43, 1.43}));
}

// The eight zip points in fixture-file order (the set is the interesting
// object; this ordering is the one the fixture CSV uses).
inline PointSet zip_points() {
  return PointSet({{2, 0}, {4.2, 0}, {6.4, 0}, {8.6, 0}, {5.3, 3}, {7.5, 3},
                   {3.1, 3}, {0.1, 2}},
                  Tolerance({2.199, 2.199}));
}

inline PointSet star_points() {
  return PointSet({{0.577, 0.99}, {0.577, -0.99}, {0, 0.0001}, {0, 0},
                   {-1.1551, 0}, {-1.155, 0}},
                  Tolerance({1, 1}));
}

inline PointSet qt_points() {
  return PointSet({{0}, {0.05}, {0.9}, {1}, {1.2}}, Tolerance({0.5}));
}

// ---------------------------------------------------------------------------
// Canonical forms and matching helpers

using Key = std::vector<IndexSet>;

inline Key canon(const Partition& part) {
  Key key;
  for (IndexSet sub : part.subsets) {
    std::sort(sub.begin(), sub.end());
    key.push_back(std::move(sub));
  }
  std::sort(key.begin(), key.end());
  return key;
}

inline Key canon(std::vector<IndexSet> subsets) {
  Partition p;
  p.subsets = std::move(subsets);
  return canon(p);
}

/// True iff every expected point is matched by exactly one representative
/// within `tol` per coordinate (and the counts agree).
inline bool reps_match(const std::vector<Point>& reps, const std::vector<Point>& expected,
                       double tol) {
  if (reps.size() != expected.size()) return false;
  std::vector<char> used(reps.size(), 0);
  for (const Point& want : expected) {
    bool found = false;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (used[i] || reps[i].size() != want.size()) continue;
      bool close = true;
      for (std::size_t k = 0; k < want.size(); ++k) {
        if (std::abs(reps[i][k] - want[k]) > tol) {
          close = false;
          break;
        }
      }
      if (close) {
        used[i] = 1;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Brute-force oracles

/// All set partitions of {0,...,n-1}.
inline std::vector<std::vector<IndexSet>> all_partitions(std::size_t n) {
  std::vector<std::vector<IndexSet>> result{{}};
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<std::vector<IndexSet>> next;
    for (const auto& part : result) {
      for (std::size_t b = 0; b < part.size(); ++b) {
        auto copy = part;
        copy[b].push_back(e);
        next.push_back(std::move(copy));
      }
      auto copy = part;
      copy.push_back({e});
      next.push_back(std::move(copy));
    }
    result = std::move(next);
  }
  return result;
}

/// A valid thinning: all subsets collapsable and no pair unifiable.
inline bool is_valid_thinning(const std::vector<IndexSet>& subsets, const PointSet& ps) {
  for (const IndexSet& sub : subsets) {
    if (!thinning::is_collapsable(sub, ps)) return false;
  }
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t j = i + 1; j < subsets.size(); ++j) {
      IndexSet merged = subsets[i];
      merged.insert(merged.end(), subsets[j].begin(), subsets[j].end());
      if (thinning::is_collapsable(merged, ps)) return false;
    }
  }
  return true;
}

/// True iff some single-point move strictly lowers the total central sum of
/// squares of `part` (full recomputation, no incremental formulas).
inline bool has_improving_move(const Partition& part, const PointSet& ps,
                               thinning::NormMode mode) {
  const double base = thinning::total_ssq(part, ps, mode);
  for (std::size_t from = 0; from < part.size(); ++from) {
    for (std::size_t pi = 0; pi < part.subsets[from].size(); ++pi) {
      for (std::size_t to = 0; to < part.size(); ++to) {
        if (to == from) continue;
        Partition moved = part;
        const std::size_t p = moved.subsets[from][pi];
        moved.subsets[from].erase(moved.subsets[from].begin() + pi);
        moved.subsets[to].push_back(p);
        if (moved.subsets[from].empty()) {
          moved.subsets.erase(moved.subsets.begin() + from);
        }
        if (thinning::total_ssq(moved, ps, mode) < base) return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Reference implementations

/// Literal merge loop that rebuilds the whole distance matrix from current
/// centroids after every merge (sentinels reset each epoch). Used to check
/// which fixtures distinguish it from the lagging incremental form.
inline std::vector<IndexSet> aa_full_recompute(const PointSet& ps) {
  std::vector<IndexSet> subsets;
  for (std::size_t i = 0; i < ps.size(); ++i) subsets.push_back({i});
  for (;;) {
    const std::size_t k = subsets.size();
    if (k <= 1) break;
    std::vector<Point> cents;
    for (const IndexSet& s : subsets) cents.push_back(thinning::centroid(s, ps));
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        m[i][j] = thinning::detail::round_12_digits(
            thinning::detail::weighted_distance_2(cents[i], cents[j], ps.tol));
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> rejected;
    bool merged = false;
    for (;;) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      bool have = false;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (rejected.count({i, j})) continue;
          if (m[i][j] < best) {
            best = m[i][j];
            bi = i;
            bj = j;
            have = true;
          }
        }
      }
      if (!have || best > 2.0) break;
      IndexSet uni = subsets[bi];
      uni.insert(uni.end(), subsets[bj].begin(), subsets[bj].end());
      std::sort(uni.begin(), uni.end());
      if (thinning::is_collapsable(uni, ps)) {
        subsets[bi] = uni;
        subsets.erase(subsets.begin() + bj);
        merged = true;
        break;
      }
      rejected.insert({bi, bj});
    }
    if (!merged) break;
  }
  return subsets;
}

/// Regression guard: the merge loop with the per-member test replaced by
/// the centroid-distance gate alone. Chosen pairs always merge, so this
/// happily glues together sets that are not collapsable.
inline std::vector<IndexSet> aa_centroid_only(const PointSet& ps) {
  const std::size_t s = ps.size();
  std::vector<IndexSet> subsets(s);
  std::vector<Point> cents(s);
  std::vector<char> alive(s, 1);
  for (std::size_t i = 0; i < s; ++i) {
    subsets[i] = {i};
    cents[i] = ps.points[i];
  }
  std::vector<std::vector<double>> m(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      m[i][j] = thinning::detail::round_12_digits(
          thinning::detail::weighted_distance_2(cents[i], cents[j], ps.tol));
    }
  }
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    bool have = false;
    for (std::size_t i = 0; i < s; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < s; ++j) {
        if (!alive[j]) continue;
        if (m[i][j] < best) {
          best = m[i][j];
          bi = i;
          bj = j;
          have = true;
        }
      }
    }
    if (!have || best > 2.0) break;
    const double mw = static_cast<double>(subsets[bi].size());
    const double kw = static_cast<double>(subsets[bj].size());
    for (std::size_t c = 0; c < cents[bi].size(); ++c) {
      cents[bi][c] = (mw * cents[bi][c] + kw * cents[bj][c]) / (mw + kw);
    }
    subsets[bi].insert(subsets[bi].end(), subsets[bj].begin(), subsets[bj].end());
    std::sort(subsets[bi].begin(), subsets[bi].end());
    alive[bj] = 0;
  }
  std::vector<IndexSet> out;
  for (std::size_t i = 0; i < s; ++i) {
    if (alive[i]) out.push_back(subsets[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random instances

struct RandomInstance {
  PointSet ps;
};

/// Mixed-scale random instance: dimension 1..max_dim, up to max_size points,
/// log-uniform per-coordinate tolerances, occasional duplicate points.
inline PointSet random_instance(std::mt19937_64& rng, std::size_t max_size,
                                std::size_t max_dim = 3) {
  auto unit = [&rng] { return thinning::detail::unit_double(rng); };
  const std::size_t n = 1 + static_cast<std::size_t>(unit() * max_dim);
  const std::size_t s = 1 + static_cast<std::size_t>(unit() * max_size);
  std::vector<double> eps(n);
  for (double& e : eps) e = std::pow(10.0, -2.0 + 4.0 * unit());
  const double scales[] = {0.5, 1.0, 3.0};
  const double scale = scales[rng() % 3];
  std::vector<Point> pts;
  pts.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (!pts.empty() && unit() < 0.1) {
      pts.push_back(pts[rng() % pts.size()]);
      continue;
    }
    Point p(n);
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = (2.0 * unit() - 1.0) * scale * eps[k];
    }
    pts.push_back(std::move(p));
  }
  return PointSet(std::move(pts), Tolerance(std::move(eps)));
}

}  // namespace testsupport
