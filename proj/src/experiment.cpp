#include "rbopt/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "rbopt/kernels.hpp"

namespace rbopt {

std::string to_string(Method m) {
  switch (m) {
    case Method::kSf: return "sf";
    case Method::kDftr: return "dftr";
    case Method::kDftrR: return "dftr-r";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "sf") return Method::kSf;
  if (name == "dftr") return Method::kDftr;
  if (name == "dftr-r" || name == "dftr_r") return Method::kDftrR;
  throw ConfigError("unknown method '" + name +
                    "'; known methods: sf, dftr, dftr-r");
}

void ExperimentSpec::validate() const {
  if (repetitions < 1)
    throw InvalidParameterError("repetitions must be >= 1");
  tr.validate();
}

RunResult run_method(const RboProblem& problem, Method method, const Vec& x0,
                     const TrParams& tr, std::int64_t n_mc, RngStream rng) {
  TrParams params = tr;
  params.n_mc = n_mc;
  switch (method) {
    case Method::kSf:
      return run_sf(problem, x0, n_mc, tr.solver, rng);
    case Method::kDftr:
      return run_dftr_no_reweight(problem, x0, params, rng);
    case Method::kDftrR:
      return run_dftr(problem, x0, params, rng);
  }
  throw InvalidParameterError("unknown method");
}

ExperimentSummary run_experiment(const ExperimentSpec& spec,
                                 const Vec& x_benchmark) {
  spec.validate();
  CantileverConfig cfg;
  cfg.sigma_wt = spec.sigma_wt;
  cfg.theta = spec.theta;
  const RboProblem problem = cantilever_problem(cfg);
  const Vec x0 = spec.x_0.size() ? spec.x_0 : cantilever_x0();
  const double f_benchmark = x_benchmark[0] * x_benchmark[1];

  ExperimentSummary summary;
  summary.repetitions = spec.repetitions;
  summary.rows.reserve(static_cast<std::size_t>(spec.repetitions));

  for (int i = 0; i < spec.repetitions; ++i) {
    RunRow row;
    row.seed = spec.seed_base + static_cast<std::uint64_t>(i);
    const RngStream rng = RngStream::from_seed(row.seed);
    const auto start = std::chrono::steady_clock::now();
    try {
      const RunResult result =
          run_method(problem, spec.method, x0, spec.tr, spec.n_mc, rng);
      row.termination = to_string(result.termination);
      row.ok = result.termination != Termination::kSurrogateFailure;
      row.counters = result.counters;
      row.x_opt = result.x_opt;
      row.f_opt = result.f_opt;
      row.error_x = (result.x_opt - x_benchmark).norm();
      row.error_f = std::abs(result.f_opt - f_benchmark);
    } catch (const std::exception& err) {
      row.ok = false;
      row.termination = std::string("error: ") + err.what();
      row.error_x = std::numeric_limits<double>::quiet_NaN();
      row.error_f = std::numeric_limits<double>::quiet_NaN();
    }
    const auto stop = std::chrono::steady_clock::now();
    row.wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    summary.rows.push_back(std::move(row));
  }

  int ok_count = 0;
  for (const RunRow& row : summary.rows) {
    if (!row.ok) continue;
    ++ok_count;
    summary.avg_error_x += row.error_x;
    summary.avg_error_f += row.error_f;
    summary.avg_full_evals += static_cast<double>(row.counters.full_evals);
  }
  if (ok_count > 0) {
    summary.avg_error_x /= ok_count;
    summary.avg_error_f /= ok_count;
    summary.avg_full_evals /= ok_count;
  }
  summary.failure_rate =
      1.0 - static_cast<double>(ok_count) / spec.repetitions;
  return summary;
}

Vec benchmark_solution(const CantileverConfig& cfg, std::int64_t n_ref,
                       RngStream rng, EvalCounters* counters) {
  if (n_ref < 1000000)
    throw InvalidParameterError("reference solve needs n_ref >= 1e6");
  const RboProblem problem = cantilever_problem(cfg);

  const double lo = cfg.box_lower + 0.5;
  const double hi = cfg.box_upper - 0.5;
  const double mid = 0.5 * (cfg.box_lower + cfg.box_upper);
  std::vector<Vec> starts;
  for (const auto& [a, b] : std::initializer_list<std::pair<double, double>>{
           {lo, lo}, {lo, hi}, {hi, lo}, {hi, hi}, {mid, mid}}) {
    Vec x(2);
    x << a, b;
    starts.push_back(x);
  }

  SolverOptions opts;
  bool found = false;
  Vec best;
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const RunResult result =
        run_sf(problem, starts[i], n_ref, opts,
               rng.child(stream_label::kSpread, static_cast<std::uint64_t>(i)));
    if (counters) {
      counters->full_evals += result.counters.full_evals;
      counters->g_calls += result.counters.g_calls;
    }
    if (result.p_hat_accept <= cfg.theta && result.f_opt < best_f) {
      best = result.x_opt;
      best_f = result.f_opt;
      found = true;
    }
  }
  if (!found)
    throw ConfigError("no feasible reference solution from any start");
  return best;
}

CantileverOracle::CantileverOracle(const CantileverConfig& cfg, std::int64_t n,
                                   RngStream rng)
    : cfg_(cfg) {
  xi_.resize(n, 5);
  const RngStream stream = rng.child(stream_label::kOracle);
  kern::map(n, [&](std::int64_t row) {
    auto eng = stream.engine(static_cast<std::uint64_t>(row));
    std::normal_distribution<double> nd;
    for (int j = 0; j < 5; ++j) xi_(row, j) = nd(eng);
  });
}

double CantileverOracle::failure_probability(const Vec& x) const {
  Vec mu(5), sd(5);
  mu << cfg_.e_mean, cfg_.load_mean, cfg_.load_mean, x[0], x[1];
  sd << cfg_.e_sd, cfg_.load_sd, cfg_.load_sd, cfg_.sigma_wt, cfg_.sigma_wt;
  const std::int64_t rows = xi_.rows();
  const std::int64_t failures = kern::count(rows, [&](std::int64_t i) {
    Vec z(5);
    for (int j = 0; j < 5; ++j) z[j] = mu[j] + sd[j] * xi_(i, j);
    return cantilever_g(cfg_, z) < 0.0;
  });
  return static_cast<double>(failures) / static_cast<double>(rows);
}

GridScan grid_scan(const CantileverConfig& cfg, int per_axis,
                   const CantileverOracle& oracle) {
  GridScan scan;
  scan.per_axis = per_axis;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      Vec x(2);
      x[0] = cfg.box_lower +
             (cfg.box_upper - cfg.box_lower) * i / (per_axis - 1.0);
      x[1] = cfg.box_lower +
             (cfg.box_upper - cfg.box_lower) * j / (per_axis - 1.0);
      const double p = oracle.failure_probability(x);
      if (p <= cfg.theta && x[0] * x[1] < best_f) {
        best_f = x[0] * x[1];
        scan.x_best = x;
        scan.f_best = best_f;
        scan.p_at_best = p;
      }
    }
  }
  if (!scan.x_best.size())
    throw ConfigError("grid scan found no feasible design");
  return scan;
}

}  // namespace rbopt
