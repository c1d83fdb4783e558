#pragma once

#include <string>
#include <vector>

#include "rbopt/driver.hpp"
#include "rbopt/serialize.hpp"

namespace rbopt {

/// Effective run configuration. Defaults follow the standard parameter table
/// (rho0 0.1, rho_min 1e-6, eps_star 0.1*theta, omega- 0.9, omega+ 1.1,
/// m 20, delta 1e-4). Accepts a flat key=value file or its flat JSON mirror;
/// unknown keys are rejected by name.
struct RunConfig {
  std::string problem = "cantilever";
  std::string method = "dftr-r";
  double sigma = 0.1;
  double theta = 0.1;
  std::int64_t n = 10000;
  std::uint64_t seed = 0;
  std::vector<double> x0;  // empty = problem default
  TrParams tr;
  int workers = 0;
  std::string out = "result.json";
  std::string trace;
  bool quiet = false;

  // experiment
  std::vector<std::string> methods = {"sf", "dftr", "dftr-r"};
  std::vector<double> sigmas = {0.1};
  std::vector<std::int64_t> ns = {10000};
  int reps = 20;
  std::uint64_t seed_base = 1000;
  std::string out_dir = ".";
  std::string benchmark_file;  // empty = <data dir>/cantilever_benchmark.json

  // benchmark-solution
  std::int64_t n_ref = 5000000;
  bool grid_check = false;
  std::int64_t grid_n = 1000000;
  int grid_points = 41;

  void validate() const;
};

/// Apply one key=value pair; throws ConfigError naming the key when unknown
/// or malformed.
void apply_config_kv(RunConfig& config, const std::string& key,
                     const std::string& value);

/// Parse a config file: flat `key = value` lines (# comments), or a flat
/// JSON object when the path ends in .json.
RunConfig parse_config_file(const std::string& path);

/// All defaults materialized; parsing this back yields an equal config.
Json effective_config_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

/// Effective config restricted to keys that influence the computation:
/// execution-environment keys (workers, output paths, quiet) are dropped so
/// result artifacts stay byte-identical across worker counts and paths.
Json computation_config_json(const RunConfig& config);

}  // namespace rbopt
