#include "rbopt/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rbopt {

Json vec_to_json(const Vec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const Json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Json surrogate_to_json(const QuadraticSurrogate& s) {
  return Json{{"center", vec_to_json(s.center)},
              {"radius", s.radius},
              {"coeffs", vec_to_json(s.coeffs)},
              {"loo_error", s.loo_error}};
}

Json counters_to_json(const EvalCounters& c) {
  return Json{{"full_evals", c.full_evals},
              {"reweighted_evals", c.reweighted_evals},
              {"g_calls", c.g_calls}};
}

Json iteration_to_json(const IterationRecord& r) {
  Json j{{"k", r.k},
         {"x", vec_to_json(r.x)},
         {"f", r.f},
         {"rho_before", r.rho_before},
         {"rho_after", r.rho_after},
         {"p_hat_accept", r.p_hat_accept},
         {"accepted", r.accepted},
         {"inner_rejections", r.inner_rejections},
         {"full_evals_so_far", r.full_evals_so_far}};
  if (r.surrogate) j["surrogate"] = surrogate_to_json(*r.surrogate);
  return j;
}

Json run_result_to_json(const RunResult& r) {
  Json iterations = Json::array();
  for (const IterationRecord& rec : r.iterations)
    iterations.push_back(iteration_to_json(rec));
  return Json{{"x_opt", vec_to_json(r.x_opt)},
              {"f_opt", r.f_opt},
              {"termination", to_string(r.termination)},
              {"p_hat_accept", r.p_hat_accept},
              {"counters", counters_to_json(r.counters)},
              {"surr_constr_calls", r.surr_constr_calls},
              {"acceptance_checks", r.acceptance_checks},
              {"iterations", iterations}};
}

Json run_row_to_json(const RunRow& row) {
  return Json{{"seed", row.seed},
              {"ok", row.ok},
              {"termination", row.termination},
              {"error_x", row.error_x},
              {"error_f", row.error_f},
              {"x_opt", vec_to_json(row.x_opt)},
              {"f_opt", row.f_opt},
              {"counters", counters_to_json(row.counters)}};
}

Json summary_to_json(const ExperimentSummary& summary) {
  Json rows = Json::array();
  for (const RunRow& row : summary.rows) rows.push_back(run_row_to_json(row));
  return Json{{"avg_error_x", summary.avg_error_x},
              {"avg_error_f", summary.avg_error_f},
              {"avg_full_evals", summary.avg_full_evals},
              {"failure_rate", summary.failure_rate},
              {"repetitions", summary.repetitions},
              {"rows", rows}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace rbopt
