#include "rbopt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbopt/config.hpp"
#include "rbopt/experiment.hpp"
#include "rbopt/kernels.hpp"

namespace rbopt {

namespace {

namespace fs = std::filesystem;

std::string data_dir() {
  if (const char* env = std::getenv("RBOPT_DATA_DIR")) return env;
  return "data";
}

// Relative output paths may be redirected via RBOPT_OUT_DIR.
std::string out_path(const std::string& path) {
  const char* env = std::getenv("RBOPT_OUT_DIR");
  if (!env || fs::path(path).is_absolute()) return path;
  return (fs::path(env) / path).string();
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

Vec x0_for(const RunConfig& config) {
  if (config.x0.empty()) return problem_x0(config.problem);
  Vec x(static_cast<Eigen::Index>(config.x0.size()));
  for (std::size_t i = 0; i < config.x0.size(); ++i)
    x[static_cast<Eigen::Index>(i)] = config.x0[i];
  return x;
}

Vec benchmark_for_sigma(const std::string& path, double sigma) {
  const Json doc = Json::parse(read_text_file(path));
  for (const Json& entry : doc.at("entries")) {
    if (std::abs(entry.at("sigma").get<double>() - sigma) < 1e-12)
      return vec_from_json(entry.at("x"));
  }
  throw ConfigError("benchmark file '" + path + "' has no entry for sigma=" +
                    format_full(sigma) +
                    "; run `rbopt benchmark-solution --sigma " +
                    format_full(sigma) + "` first");
}

int cmd_solve(const RunConfig& config) {
  kern::set_workers(config.workers);
  config.validate();
  const RboProblem problem =
      make_problem(config.problem, config.sigma, config.theta);
  const Vec x0 = x0_for(config);
  const RunResult result =
      run_method(problem, method_from_string(config.method), x0, config.tr,
                 config.n, RngStream::from_seed(config.seed));

  Json out;
  out["config"] = computation_config_json(config);
  out["result"] = run_result_to_json(result);
  write_text_file(out_path(config.out), out.dump(2) + "\n");

  if (!config.trace.empty()) {
    std::string lines;
    for (const IterationRecord& rec : result.iterations)
      lines += iteration_to_json(rec).dump() + "\n";
    write_text_file(out_path(config.trace), lines);
  }
  if (!config.quiet) {
    std::cout << config.method << " " << config.problem
              << ": f_opt=" << format_full(result.f_opt)
              << " termination=" << to_string(result.termination)
              << " full_evals=" << result.counters.full_evals << "\n";
  }
  return result.termination == Termination::kSurrogateFailure ? 2 : 0;
}

int cmd_experiment(const RunConfig& config, bool dry_run) {
  kern::set_workers(config.workers);
  config.validate();
  if (config.problem != "cantilever")
    throw ConfigError("experiment supports only problem=cantilever");

  struct Cell {
    double sigma;
    std::int64_t n;
    std::string method;
  };
  std::vector<Cell> cells;
  for (double sigma : config.sigmas)
    for (std::int64_t n : config.ns)
      for (const std::string& method : config.methods)
        cells.push_back({sigma, n, method});

  if (dry_run) {
    std::cout << "planned experiment matrix (" << cells.size() << " cells x "
              << config.reps << " repetitions):\n";
    for (const Cell& cell : cells)
      std::cout << "  sigma=" << cell.sigma << " n=" << cell.n << " method="
                << cell.method << "\n";
    return 0;
  }

  const std::string bench_path =
      config.benchmark_file.empty()
          ? (fs::path(data_dir()) / "cantilever_benchmark.json").string()
          : config.benchmark_file;

  std::string runs_csv =
      "method,sigma,n_mc,seed,error_x,error_f,full_evals,g_calls,"
      "termination,wall_ms\n";
  std::string summary_csv =
      "sigma,n_mc,method,avg_error_x,avg_error_f,avg_full_evals,"
      "failure_rate,repetitions\n";
  Json experiment_json = Json::array();

  std::int64_t total_rows = 0, failed_rows = 0;
  for (const Cell& cell : cells) {
    ExperimentSpec spec;
    spec.method = method_from_string(cell.method);
    spec.n_mc = cell.n;
    spec.sigma_wt = cell.sigma;
    spec.theta = config.theta;
    spec.repetitions = config.reps;
    spec.seed_base = config.seed_base;
    spec.x_0 = config.x0.empty() ? Vec() : x0_for(config);
    spec.tr = config.tr;

    const Vec x_bench = benchmark_for_sigma(bench_path, cell.sigma);
    const ExperimentSummary summary = run_experiment(spec, x_bench);

    for (const RunRow& row : summary.rows) {
      ++total_rows;
      if (!row.ok) ++failed_rows;
      runs_csv += cell.method + "," + format_full(cell.sigma) + "," +
                  std::to_string(cell.n) + "," + std::to_string(row.seed) +
                  "," + format_full(row.error_x) + "," +
                  format_full(row.error_f) + "," +
                  std::to_string(row.counters.full_evals) + "," +
                  std::to_string(row.counters.g_calls) + "," +
                  csv_safe(row.termination) + "," + format_full(row.wall_ms) +
                  "\n";
    }
    summary_csv += format_full(cell.sigma) + "," + std::to_string(cell.n) +
                   "," + cell.method + "," + format_full(summary.avg_error_x) +
                   "," + format_full(summary.avg_error_f) + "," +
                   format_full(summary.avg_full_evals) + "," +
                   format_full(summary.failure_rate) + "," +
                   std::to_string(summary.repetitions) + "\n";
    Json cell_json = summary_to_json(summary);
    cell_json["sigma"] = cell.sigma;
    cell_json["n_mc"] = cell.n;
    cell_json["method"] = cell.method;
    experiment_json.push_back(std::move(cell_json));

    if (!config.quiet) {
      std::cout << "sigma=" << cell.sigma << " n=" << cell.n << " "
                << cell.method << ": avg_error=" << summary.avg_error_x
                << " avg_full_evals=" << summary.avg_full_evals
                << " failure_rate=" << summary.failure_rate << "\n";
    }
  }

  const fs::path dir = out_path(config.out_dir);
  fs::create_directories(dir);
  write_text_file((dir / "runs.csv").string(), runs_csv);
  write_text_file((dir / "summary.csv").string(), summary_csv);
  Json doc;
  doc["config"] = computation_config_json(config);
  doc["cells"] = std::move(experiment_json);
  write_text_file((dir / "experiment.json").string(), doc.dump(2) + "\n");

  return (total_rows > 0 && failed_rows == total_rows) ? 2 : 0;
}

int cmd_benchmark_solution(const RunConfig& config) {
  kern::set_workers(config.workers);
  config.validate();
  CantileverConfig cfg;
  cfg.sigma_wt = config.sigma;
  cfg.theta = config.theta;

  const RngStream rng = RngStream::from_seed(config.seed);
  EvalCounters counters;
  const Vec x = benchmark_solution(cfg, config.n_ref, rng, &counters);

  const CantileverOracle oracle(cfg, config.grid_n,
                                RngStream::from_seed(config.seed + 1));
  Json entry;
  entry["sigma"] = cfg.sigma_wt;
  entry["theta"] = cfg.theta;
  entry["x"] = vec_to_json(x);
  entry["f"] = x[0] * x[1];
  entry["p_oracle"] = oracle.failure_probability(x);
  entry["n_ref"] = config.n_ref;
  entry["seed"] = config.seed;
  if (config.grid_check) {
    const GridScan scan = grid_scan(cfg, config.grid_points, oracle);
    Json grid;
    grid["x"] = vec_to_json(scan.x_best);
    grid["f"] = scan.f_best;
    grid["p"] = scan.p_at_best;
    grid["per_axis"] = scan.per_axis;
    grid["distance_to_solution"] = (scan.x_best - x).norm();
    entry["grid"] = std::move(grid);
  }

  const std::string path =
      config.out != "result.json"
          ? config.out
          : (fs::path(data_dir()) / "cantilever_benchmark.json").string();
  Json doc;
  doc["entries"] = Json::array();
  if (fs::exists(out_path(path))) {
    try {
      doc = Json::parse(read_text_file(out_path(path)));
    } catch (const std::exception&) {
      doc["entries"] = Json::array();
    }
  }
  Json entries = Json::array();
  for (const Json& existing : doc["entries"]) {
    if (std::abs(existing.at("sigma").get<double>() - cfg.sigma_wt) >= 1e-12)
      entries.push_back(existing);
  }
  entries.push_back(std::move(entry));
  std::sort(entries.begin(), entries.end(), [](const Json& a, const Json& b) {
    return a.at("sigma").get<double>() > b.at("sigma").get<double>();
  });
  doc["entries"] = std::move(entries);
  fs::create_directories(fs::path(out_path(path)).parent_path());
  write_text_file(out_path(path), doc.dump(2) + "\n");

  if (!config.quiet) {
    std::cout << "benchmark solution sigma=" << cfg.sigma_wt << ": x=("
              << format_full(x[0]) << ", " << format_full(x[1])
              << ") f=" << format_full(x[0] * x[1])
              << " full_evals=" << counters.full_evals << " -> " << path
              << "\n";
  }
  return 0;
}

void add_config_options(CLI::App* cmd, std::map<std::string, std::string>& kv,
                        std::string* config_path) {
  cmd->add_option("--config", *config_path,
                  "config file (key = value lines, or flat .json)");
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"problem", "problem name (see list-problems)"},
      {"method", "sf | dftr | dftr-r"},
      {"sigma", "width/height noise level"},
      {"theta", "failure probability threshold"},
      {"n", "Monte Carlo sample size"},
      {"seed", "base seed"},
      {"x0", "starting point, comma separated"},
      {"rho0", "initial trust-region radius"},
      {"rho-min", "minimal trust-region radius"},
      {"eps-star", "surrogate error bound (default 0.1*theta)"},
      {"omega-plus", "radius expansion factor"},
      {"omega-minus", "radius contraction factor"},
      {"delta", "cost-stall termination threshold"},
      {"m-points", "points per surrogate fit"},
      {"max-outer", "outer iteration bound"},
      {"acceptance", "full | reweighted"},
      {"recycle", "reuse acceptance evaluation at the next center"},
      {"kkt-tol", "subproblem KKT tolerance"},
      {"n-starts", "subproblem multi-starts"},
      {"max-sqp-iters", "SQP iteration bound"},
      {"workers", "worker threads (0 = hardware)"},
      {"out", "result path"},
      {"trace", "per-iteration JSON-lines path"},
      {"quiet", "suppress progress output"},
      {"methods", "experiment methods, comma separated"},
      {"sigmas", "experiment noise levels, comma separated"},
      {"ns", "experiment sample sizes, comma separated"},
      {"reps", "experiment repetitions"},
      {"seed-base", "experiment base seed"},
      {"out-dir", "experiment output directory"},
      {"benchmark", "benchmark-solution fixture path"},
      {"n-ref", "reference-solution sample size"},
      {"grid-check", "cross-check the reference solution on a grid"},
      {"grid-n", "oracle samples per grid point"},
      {"grid-points", "grid points per axis"},
  };
  for (const auto& [key, desc] : keys) {
    cmd->add_option_function<std::string>(
        "--" + key,
        [&kv, k = key](const std::string& v) { kv[k] = v; }, desc);
  }
}

RunConfig build_config(const std::string& config_path,
                       const std::map<std::string, std::string>& kv) {
  RunConfig config;
  if (!config_path.empty()) config = parse_config_file(config_path);
  for (const auto& [key, value] : kv) apply_config_kv(config, key, value);
  return config;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"derivative-free trust-region solver for reliability-based "
               "optimization"};
  app.require_subcommand(1);

  std::map<std::string, std::string> kv;
  std::string config_path;
  bool dry_run = false;

  CLI::App* solve = app.add_subcommand("solve", "run one optimization");
  add_config_options(solve, kv, &config_path);

  CLI::App* experiment =
      app.add_subcommand("experiment", "run the repeated-run comparison");
  add_config_options(experiment, kv, &config_path);
  experiment->add_flag("--dry-run", dry_run,
                       "print the planned matrix and exit");

  CLI::App* bench = app.add_subcommand(
      "benchmark-solution", "compute and cache the reference solution");
  add_config_options(bench, kv, &config_path);

  app.add_subcommand("list-problems", "list registered problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(build_config(config_path, kv));
    if (experiment->parsed())
      return cmd_experiment(build_config(config_path, kv), dry_run);
    if (bench->parsed())
      return cmd_benchmark_solution(build_config(config_path, kv));
    for (const std::string& name : problem_names()) std::cout << name << "\n";
    return 0;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const InvalidParameterError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}

}  // namespace rbopt
