#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thinning/agglomerative.hpp"
#include "thinning/core.hpp"
#include "thinning/divisive.hpp"
#include "thinning/grid.hpp"

/// @file pipeline.hpp
/// Data ingestion, algorithm composition (grid prefilter feeding the
/// agglomerative or divisive stage) and result serialization.

namespace thinning {

enum class Algorithm { aa, da, grid, grid_aa, grid_da };
enum class FileFormat { csv, json };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::aa: return "aa";
    case Algorithm::da: return "da";
    case Algorithm::grid: return "grid";
    case Algorithm::grid_aa: return "grid+aa";
    case Algorithm::grid_da: return "grid+da";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  if (s == "aa") return Algorithm::aa;
  if (s == "da") return Algorithm::da;
  if (s == "grid") return Algorithm::grid;
  if (s == "grid+aa") return Algorithm::grid_aa;
  if (s == "grid+da") return Algorithm::grid_da;
  return std::nullopt;
}

struct RunConfig {
  Algorithm algorithm = Algorithm::aa;
  /// Per-coordinate bounds; a single entry is broadcast to the data
  /// dimension at load time.
  std::vector<double> tolerance;
  /// 0 selects the per-mode default: 1/2 for grid and grid+da, 1/4 for
  /// grid+aa (a finer first pass before the slower exact stage).
  double grid_radius = 0.0;
  NormMode norm_mode = NormMode::weighted;
  std::string input_path;
  std::string output_path;
  FileFormat output_format = FileFormat::json;
  bool emit_trace = false;
};

struct RunStats {
  std::size_t n_input = 0;
  std::size_t n_output = 0;
  /// Grid stages only: bucket count and the size of the second stage input.
  std::size_t stage1_cells = 0;
  std::size_t stage2_input = 0;
  bool two_stage = false;
  double wall_ms = 0.0;  // reported on stderr / bench CSV, never serialized
};

struct RunOutput {
  ThinningResult result;
  RunStats stats;
};

// ---------------------------------------------------------------------------
// Ingestion

namespace detail {

inline double parse_coord(const std::string& token, std::size_t line_no) {
  const char* b = token.data();
  const char* e = b + token.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) {
    throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                ": bad coordinate '" + token + "'");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                ": non-finite coordinate");
  }
  return v;
}

}  // namespace detail

/// Reads one point per line, comma separated. Lines starting with '#' and
/// blank lines are skipped; file order is preserved (index i = i-th data
/// line). Ragged rows, unparsable or non-finite coordinates and empty
/// inputs are rejected with the offending line number.
inline std::vector<Point> parse_points_csv(std::istream& in) {
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    Point p;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string token = line.substr(start, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - start);
      p.push_back(detail::parse_coord(token, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      dim = p.size();
    } else if (p.size() != dim) {
      throw std::invalid_argument("parse error at line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(dim) +
                                  " coordinates, got " + std::to_string(p.size()));
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw std::invalid_argument("no points in input");
  return points;
}

/// Accepts either a JSON array of coordinate arrays or an object with a
/// "points" member holding one.
inline std::vector<Point> parse_points_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad JSON input: ") + e.what());
  }
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("points")) throw std::invalid_argument("JSON input: missing 'points'");
    arr = &doc["points"];
  }
  if (!arr->is_array() || arr->empty()) {
    throw std::invalid_argument("JSON input: expected a non-empty array of points");
  }
  std::vector<Point> points;
  std::size_t dim = 0;
  for (const auto& row : *arr) {
    if (!row.is_array()) throw std::invalid_argument("JSON input: point is not an array");
    Point p;
    for (const auto& c : row) {
      if (!c.is_number()) throw std::invalid_argument("JSON input: coordinate is not a number");
      const double v = c.get<double>();
      if (!std::isfinite(v)) throw std::invalid_argument("JSON input: non-finite coordinate");
      p.push_back(v);
    }
    if (dim == 0) dim = p.size();
    if (p.size() != dim || p.empty()) {
      throw std::invalid_argument("JSON input: inconsistent point dimensions");
    }
    points.push_back(std::move(p));
  }
  return points;
}

inline std::vector<Point> load_points(const std::string& path, FileFormat format) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  try {
    return format == FileFormat::csv ? parse_points_csv(in) : parse_points_json(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

/// Picks the input format from the file extension (.json, otherwise CSV).
inline FileFormat sniff_format(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return FileFormat::json;
  }
  return FileFormat::csv;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt_double(double v) {
  internal_check(std::isfinite(v), "serializer: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void append_coords(std::string& out, const Point& p) {
  out += '[';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(p[i]);
  }
  out += ']';
}

}  // namespace detail

/// Fixed-layout JSON document; identical inputs produce identical bytes.
/// Subset indices are 0-based positions in the input file.
inline std::string format_result_json(const ThinningResult& result, const RunStats& stats,
                                      Algorithm algorithm, const Tolerance& tol) {
  detail::internal_check(!result.representatives.empty(),
                         "serializer: empty representative list");
  detail::internal_check(result.representatives.size() == result.partition.size(),
                         "serializer: partition/representative size mismatch");
  std::string out;
  out += "{\n  \"tolerance\": ";
  detail::append_coords(out, tol.eps);
  out += ",\n  \"algorithm\": \"";
  out += algorithm_name(algorithm);
  out += "\",\n  \"subsets\": [";
  for (std::size_t i = 0; i < result.partition.size(); ++i) {
    if (i) out += ',';
    out += "\n    [";
    const IndexSet& sub = result.partition.subsets[i];
    for (std::size_t k = 0; k < sub.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(sub[k]);
    }
    out += ']';
  }
  out += "\n  ],\n  \"representatives\": [";
  for (std::size_t i = 0; i < result.representatives.size(); ++i) {
    if (i) out += ',';
    out += "\n    ";
    detail::append_coords(out, result.representatives[i]);
  }
  out += "\n  ],\n  \"stats\": {\"n_input\": ";
  out += std::to_string(stats.n_input);
  out += ", \"n_output\": ";
  out += std::to_string(stats.n_output);
  if (stats.two_stage || stats.stage1_cells != 0) {
    out += ", \"stage1_cells\": ";
    out += std::to_string(stats.stage1_cells);
    out += ", \"stage2_input\": ";
    out += std::to_string(stats.stage2_input);
  }
  out += "}\n}\n";
  return out;
}

/// Representatives only, one point per line.
inline std::string format_result_csv(const ThinningResult& result) {
  detail::internal_check(!result.representatives.empty(),
                         "serializer: empty representative list");
  std::string out;
  for (const Point& p : result.representatives) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += detail::fmt_double(p[i]);
    }
    out += '\n';
  }
  return out;
}

inline void write_result(const ThinningResult& result, const RunStats& stats,
                         Algorithm algorithm, const Tolerance& tol,
                         const std::string& path, FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << (format == FileFormat::json ? format_result_json(result, stats, algorithm, tol)
                                     : format_result_csv(result));
  if (!out) throw std::invalid_argument("write failed: " + path);
}

/// Parsed form of the JSON document, for programmatic consumers and the
/// round-trip tests.
struct ResultDocument {
  Tolerance tolerance;
  std::string algorithm;
  Partition partition;
  std::vector<Point> representatives;
};

inline ResultDocument read_result_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  ResultDocument r;
  r.tolerance = Tolerance(doc.at("tolerance").get<std::vector<double>>());
  r.algorithm = doc.at("algorithm").get<std::string>();
  for (const auto& sub : doc.at("subsets")) {
    r.partition.subsets.push_back(sub.get<IndexSet>());
  }
  for (const auto& rep : doc.at("representatives")) {
    r.representatives.push_back(rep.get<Point>());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Composition

namespace detail {

inline void print_partition(std::ostream& os, const Partition& part) {
  for (std::size_t i = 0; i < part.size(); ++i) {
    os << (i ? " {" : "{");
    const IndexSet& sub = part.subsets[i];
    for (std::size_t k = 0; k < sub.size(); ++k) {
      if (k) os << ',';
      os << sub[k] + 1;  // 1-based in the human-readable trace
    }
    os << '}';
  }
  os << '\n';
}

inline void print_trace(const char* label, const std::vector<Partition>& steps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::cout << label << " step " << i + 1 << ": ";
    print_partition(std::cout, steps[i]);
  }
}

}  // namespace detail

inline double default_grid_radius(Algorithm a) {
  return a == Algorithm::grid_aa ? 0.25 : 0.5;
}

/// Runs one algorithm (or the grid-then-exact composition) on an in-memory
/// point set. For two-stage modes the grid representatives enter the second
/// stage with weight 1 and the final subsets are composed back onto the
/// original indices; representatives are the second stage's centroids.
inline RunOutput run_on_points(const RunConfig& config, std::vector<Point> raw_points) {
  const auto t0 = std::chrono::steady_clock::now();

  detail::require(!raw_points.empty(), "run: no input points");
  std::vector<double> eps = config.tolerance;
  const std::size_t dim = raw_points[0].size();
  if (eps.size() == 1 && dim > 1) eps.assign(dim, eps[0]);  // scalar broadcast
  PointSet ps(std::move(raw_points), Tolerance(eps));

  RunOutput out;
  out.stats.n_input = ps.size();
  const double radius =
      config.grid_radius > 0.0 ? config.grid_radius : default_grid_radius(config.algorithm);

  std::vector<Partition> trace;
  std::vector<Partition>* trace_ptr = config.emit_trace ? &trace : nullptr;

  switch (config.algorithm) {
    case Algorithm::aa:
      out.result = aa_run(ps, trace_ptr);
      if (trace_ptr) detail::print_trace("aa", trace);
      break;
    case Algorithm::da:
      out.result = da_run(ps, config.norm_mode, trace_ptr);
      if (trace_ptr) detail::print_trace("da", trace);
      break;
    case Algorithm::grid:
      out.result = grid_partition(ps, radius);
      out.stats.stage1_cells = out.result.partition.size();
      break;
    case Algorithm::grid_aa:
    case Algorithm::grid_da: {
      const ThinningResult stage1 = grid_partition(ps, radius);
      out.stats.two_stage = true;
      out.stats.stage1_cells = stage1.partition.size();
      out.stats.stage2_input = stage1.representatives.size();
      PointSet reps(stage1.representatives, ps.tol);
      const ThinningResult stage2 = config.algorithm == Algorithm::grid_aa
                                        ? aa_run(reps, trace_ptr)
                                        : da_run(reps, config.norm_mode, trace_ptr);
      if (trace_ptr) {
        detail::print_trace(config.algorithm == Algorithm::grid_aa ? "grid+aa" : "grid+da",
                            trace);
      }
      // Compose second-stage groups of cells back onto original indices.
      out.result.representatives = stage2.representatives;
      out.result.partition.subsets.reserve(stage2.partition.size());
      for (const IndexSet& group : stage2.partition.subsets) {
        IndexSet members;
        for (std::size_t cell : group) {
          const IndexSet& cm = stage1.partition.subsets[cell];
          members.insert(members.end(), cm.begin(), cm.end());
        }
        std::sort(members.begin(), members.end());
        out.result.partition.subsets.push_back(std::move(members));
      }
      break;
    }
  }

  validate_partition(out.result.partition, ps.size());
  out.stats.n_output = out.result.representatives.size();
  out.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// load_points + run_on_points.
inline RunOutput run(const RunConfig& config) {
  return run_on_points(config,
                       load_points(config.input_path, sniff_format(config.input_path)));
}

}  // namespace thinning
