#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "thinning/pipeline.hpp"

/// @file bench.hpp
/// Seeded dataset generators and the timing/count harness for the circle
/// and clouds suites. Generation uses std::mt19937_64 (whose output stream
/// is pinned by the standard) with a 53-bit uniform extractor, so datasets
/// are identical across platforms and standard libraries.

namespace thinning {

namespace detail {

inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0,1)
}

}  // namespace detail

struct CircleSpec {
  std::size_t count = 2504;
  double radius = 200.0;
  Point center = {0.0, 0.0};
  double jitter = 2.0;
  std::uint64_t seed = 1;
};

/// Points at angles uniform in [0,2pi) and radial offset uniform in
/// [-jitter, jitter] around the circle.
inline std::vector<Point> gen_circle(const CircleSpec& spec) {
  detail::require(spec.count >= 1, "gen_circle: count must be positive");
  detail::require(spec.jitter >= 0.0, "gen_circle: jitter must be non-negative");
  detail::require(spec.center.size() == 2, "gen_circle: center must be 2-D");
  std::mt19937_64 rng(spec.seed);
  std::vector<Point> pts;
  pts.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double angle = 2.0 * M_PI * detail::unit_double(rng);
    const double r = spec.radius + spec.jitter * (2.0 * detail::unit_double(rng) - 1.0);
    pts.push_back({spec.center[0] + r * std::cos(angle),
                   spec.center[1] + r * std::sin(angle)});
  }
  return pts;
}

/// Two seeded disks (82 points inside disk((0,0),10), 64 inside
/// disk((40,50),10)) plus the five fixed points (49,0),(50,0),(50,1),
/// (9,41),(-10,80). 151 points total; the generator seed is fixed.
inline std::vector<Point> gen_clouds() {
  std::mt19937_64 rng(811);
  std::vector<Point> pts;
  pts.reserve(151);
  const struct { double cx, cy; int count; } disks[] = {{0.0, 0.0, 82}, {40.0, 50.0, 64}};
  for (const auto& d : disks) {
    for (int i = 0; i < d.count; ++i) {
      const double r = 10.0 * std::sqrt(detail::unit_double(rng));
      const double a = 2.0 * M_PI * detail::unit_double(rng);
      pts.push_back({d.cx + r * std::cos(a), d.cy + r * std::sin(a)});
    }
  }
  pts.push_back({49.0, 0.0});
  pts.push_back({50.0, 0.0});
  pts.push_back({50.0, 1.0});
  pts.push_back({9.0, 41.0});
  pts.push_back({-10.0, 80.0});
  return pts;
}

struct BenchRow {
  double eps = 0.0;
  std::string algo;
  std::size_t n_points = 0;
  std::size_t n_vr = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

struct TableSpec {
  std::string suite = "circle";  // "circle" or "clouds"
  std::vector<double> eps = {1, 2, 4, 8, 16, 32, 64};
  std::vector<std::string> algos = {"aa", "da"};
  std::uint64_t seed = 1;
  std::size_t count = 2504;   // circle suite only
  double jitter = 2.0;        // circle suite only
};

/// One timed cell per (eps, algorithm). Cells run sequentially so the
/// timings are not skewed by contention.
inline std::vector<BenchRow> run_table(const TableSpec& spec) {
  detail::require(spec.suite == "circle" || spec.suite == "clouds",
                  "run_table: unknown suite");
  std::vector<Point> base;
  if (spec.suite == "circle") {
    CircleSpec cs;
    cs.count = spec.count;
    cs.jitter = spec.jitter;
    cs.seed = spec.seed;
    base = gen_circle(cs);
  } else {
    base = gen_clouds();
  }

  std::vector<BenchRow> rows;
  for (double eps : spec.eps) {
    for (const std::string& algo : spec.algos) {
      const auto parsed = parse_algorithm(algo);
      detail::require(parsed.has_value(), "run_table: unknown algorithm");
      RunConfig config;
      config.algorithm = *parsed;
      config.tolerance = {eps};
      const auto t0 = std::chrono::steady_clock::now();
      const RunOutput out = run_on_points(config, base);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      rows.push_back({eps, algo, base.size(), out.stats.n_output, ms, spec.seed});
    }
  }
  return rows;
}

inline std::string format_table_text(const std::vector<BenchRow>& rows) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%8s %10s %10s %10s %14s %8s\n", "eps", "algo",
                "n_points", "n_vr", "wall_ms", "seed");
  out += line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line, "%8g %10s %10zu %10zu %14.3f %8llu\n", r.eps,
                  r.algo.c_str(), r.n_points, r.n_vr, r.wall_ms,
                  static_cast<unsigned long long>(r.seed));
    out += line;
  }
  return out;
}

inline std::string format_table_csv(const std::vector<BenchRow>& rows) {
  std::string out = "eps,algo,n_points,n_vr,wall_ms,seed\n";
  char line[160];
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line, "%g,%s,%zu,%zu,%.3f,%llu\n", r.eps, r.algo.c_str(),
                  r.n_points, r.n_vr, r.wall_ms,
                  static_cast<unsigned long long>(r.seed));
    out += line;
  }
  return out;
}

}  // namespace thinning
