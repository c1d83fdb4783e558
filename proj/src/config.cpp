#include "rbopt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "rbopt/experiment.hpp"

namespace rbopt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long direct = std::stoll(value, &pos);
    if (pos == value.size()) return direct;
  } catch (const std::exception&) {
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);  // accept 1e5 style counts
    if (pos != value.size() || v != std::floor(v))
      throw std::invalid_argument(value);
    return static_cast<std::int64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" +
                    value + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0))
    throw ConfigError("theta must lie in (0,1)");
  if (n < 1) throw ConfigError("n must be >= 1");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  method_from_string(method);
  try {
    tr.validate();
  } catch (const InvalidParameterError& err) {
    throw ConfigError(err.what());
  }
  for (const std::string& m : methods) method_from_string(m);
}

void apply_config_kv(RunConfig& c, const std::string& raw_key,
                     const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "problem") c.problem = value;
  else if (key == "method") c.method = value;
  else if (key == "sigma") c.sigma = parse_double(key, value);
  else if (key == "theta") c.theta = parse_double(key, value);
  else if (key == "n") c.n = parse_int(key, value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "x0") {
    c.x0.clear();
    for (const std::string& part : split(value, ','))
      c.x0.push_back(parse_double(key, part));
  }
  else if (key == "rho0") c.tr.rho_0 = parse_double(key, value);
  else if (key == "rho-min") c.tr.rho_min = parse_double(key, value);
  else if (key == "eps-star") c.tr.eps_star = parse_double(key, value);
  else if (key == "omega-plus") c.tr.omega_plus = parse_double(key, value);
  else if (key == "omega-minus") c.tr.omega_minus = parse_double(key, value);
  else if (key == "delta") c.tr.delta = parse_double(key, value);
  else if (key == "m-points") c.tr.m_points = static_cast<int>(parse_int(key, value));
  else if (key == "max-outer") c.tr.max_outer = static_cast<int>(parse_int(key, value));
  else if (key == "acceptance") {
    if (value == "full") c.tr.acceptance_mode = AcceptanceMode::kFull;
    else if (value == "reweighted") c.tr.acceptance_mode = AcceptanceMode::kReweighted;
    else throw ConfigError("config key 'acceptance': expected full|reweighted, got '" + value + "'");
  }
  else if (key == "recycle") c.tr.recycle_acceptance_eval = parse_bool(key, value);
  else if (key == "kkt-tol") c.tr.solver.kkt_tol = parse_double(key, value);
  else if (key == "n-starts") c.tr.solver.n_starts = static_cast<int>(parse_int(key, value));
  else if (key == "max-sqp-iters") c.tr.solver.max_sqp_iters = static_cast<int>(parse_int(key, value));
  else if (key == "workers") c.workers = static_cast<int>(parse_int(key, value));
  else if (key == "out") c.out = value;
  else if (key == "trace") c.trace = value;
  else if (key == "quiet") c.quiet = parse_bool(key, value);
  else if (key == "methods") c.methods = split(value, ',');
  else if (key == "sigmas") {
    c.sigmas.clear();
    for (const std::string& part : split(value, ','))
      c.sigmas.push_back(parse_double(key, part));
  }
  else if (key == "ns") {
    c.ns.clear();
    for (const std::string& part : split(value, ','))
      c.ns.push_back(parse_int(key, part));
  }
  else if (key == "reps") c.reps = static_cast<int>(parse_int(key, value));
  else if (key == "seed-base") c.seed_base = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "out-dir") c.out_dir = value;
  else if (key == "benchmark") c.benchmark_file = value;
  else if (key == "n-ref") c.n_ref = parse_int(key, value);
  else if (key == "grid-check") c.grid_check = parse_bool(key, value);
  else if (key == "grid-n") c.grid_n = parse_int(key, value);
  else if (key == "grid-points") c.grid_points = static_cast<int>(parse_int(key, value));
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  RunConfig config;
  const std::string text = read_text_file(path);
  const bool is_json = path.size() >= 5 &&
                       path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) {
    Json j = Json::parse(text, nullptr, true, true);
    return config_from_json(j);
  }
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + t + "'");
    apply_config_kv(config, t.substr(0, eq), t.substr(eq + 1));
  }
  return config;
}

Json effective_config_json(const RunConfig& c) {
  Json j;
  j["problem"] = c.problem;
  j["method"] = c.method;
  j["sigma"] = c.sigma;
  j["theta"] = c.theta;
  j["n"] = c.n;
  j["seed"] = c.seed;
  {
    Json arr = Json::array();
    for (double v : c.x0) arr.push_back(v);
    j["x0"] = arr;
  }
  j["rho0"] = c.tr.rho_0;
  j["rho-min"] = c.tr.rho_min;
  j["eps-star"] = c.tr.resolved_eps_star(c.theta);
  j["omega-plus"] = c.tr.omega_plus;
  j["omega-minus"] = c.tr.omega_minus;
  j["delta"] = c.tr.delta;
  j["m-points"] = c.tr.m_points;
  j["max-outer"] = c.tr.max_outer;
  j["acceptance"] =
      c.tr.acceptance_mode == AcceptanceMode::kFull ? "full" : "reweighted";
  j["recycle"] = c.tr.recycle_acceptance_eval;
  j["kkt-tol"] = c.tr.solver.kkt_tol;
  j["n-starts"] = c.tr.solver.n_starts;
  j["max-sqp-iters"] = c.tr.solver.max_sqp_iters;
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["trace"] = c.trace;
  j["quiet"] = c.quiet;
  {
    Json arr = Json::array();
    for (const std::string& m : c.methods) arr.push_back(m);
    j["methods"] = arr;
  }
  {
    Json arr = Json::array();
    for (double v : c.sigmas) arr.push_back(v);
    j["sigmas"] = arr;
  }
  {
    Json arr = Json::array();
    for (std::int64_t v : c.ns) arr.push_back(v);
    j["ns"] = arr;
  }
  j["reps"] = c.reps;
  j["seed-base"] = c.seed_base;
  j["out-dir"] = c.out_dir;
  j["benchmark"] = c.benchmark_file;
  j["n-ref"] = c.n_ref;
  j["grid-check"] = c.grid_check;
  j["grid-n"] = c.grid_n;
  j["grid-points"] = c.grid_points;
  return j;
}

Json computation_config_json(const RunConfig& c) {
  Json j = effective_config_json(c);
  for (const char* key : {"workers", "out", "trace", "quiet", "out-dir"})
    j.erase(key);
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (v.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) joined += ",";
        if (v[i].is_string()) joined += v[i].get<std::string>();
        else joined += format_full(v[i].get<double>());
      }
      apply_config_kv(c, key, joined);
    } else if (v.is_string()) {
      apply_config_kv(c, key, v.get<std::string>());
    } else if (v.is_boolean()) {
      apply_config_kv(c, key, v.get<bool>() ? "true" : "false");
    } else {
      apply_config_kv(c, key, format_full(v.get<double>()));
    }
  }
  return c;
}

}  // namespace rbopt
