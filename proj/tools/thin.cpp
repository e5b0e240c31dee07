// Command line front end: thin a point set and write the partition plus
// representatives to a file.
//
// Exit codes: 0 success, 1 bad input or I/O failure, 2 internal error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thinning/thinning.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      values.push_back(thinning::detail::parse_coord(token, 0));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(std::string(flag) + ": bad value '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin: replace collapsable groups of noisy points by their centroids"};

  std::string algo = "aa";
  std::string tol;
  std::string norm_mode = "weighted";
  std::string format = "json";
  thinning::RunConfig config;

  app.add_option("--algo", algo, "Algorithm: aa, da, grid, grid+aa, grid+da")
      ->check(CLI::IsMember({"aa", "da", "grid", "grid+aa", "grid+da"}));
  app.add_option("--tol", tol,
                 "Per-coordinate tolerance, comma separated; a single value "
                 "is broadcast to all coordinates")
      ->required();
  app.add_option("--grid-radius", config.grid_radius,
                 "Weighted infinity-norm cell radius for grid stages "
                 "(default: 1/4 before aa, 1/2 otherwise)");
  app.add_option("--norm-mode", norm_mode, "Sum-of-squares geometry for da")
      ->check(CLI::IsMember({"weighted", "unweighted"}));
  app.add_flag("--trace", config.emit_trace, "Log each iteration's partition to stdout");
  app.add_option("-i,--input", config.input_path, "Input points (.csv or .json)")->required();
  app.add_option("-o,--output", config.output_path, "Output file")->required();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    config.algorithm = *thinning::parse_algorithm(algo);
    config.tolerance = parse_double_list(tol, "--tol");
    config.norm_mode = norm_mode == "weighted" ? thinning::NormMode::weighted
                                               : thinning::NormMode::unweighted;
    config.output_format = format == "json" ? thinning::FileFormat::json
                                            : thinning::FileFormat::csv;

    const thinning::RunOutput out = thinning::run(config);
    const thinning::Tolerance written_tol(
        config.tolerance.size() == 1 && !out.result.representatives.empty()
            ? std::vector<double>(out.result.representatives[0].size(), config.tolerance[0])
            : config.tolerance);
    thinning::write_result(out.result, out.stats, config.algorithm, written_tol,
                           config.output_path, config.output_format);
    std::fprintf(stderr, "%s: %zu points -> %zu representatives in %.3f ms\n",
                 thinning::algorithm_name(config.algorithm), out.stats.n_input,
                 out.stats.n_output, out.stats.wall_ms);
    return 0;
  } catch (const thinning::internal_error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
