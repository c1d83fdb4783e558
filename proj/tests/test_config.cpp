#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "rbopt/cli.hpp"
#include "rbopt/config.hpp"

using namespace rbopt;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("rbopt_test_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("rbopt");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("unknown keys are rejected by name") {
  RunConfig config;
  CHECK_THROWS_WITH_AS(apply_config_kv(config, "rho-zero", "0.1"),
                       "unknown config key 'rho-zero'", ConfigError);
}

TEST_CASE("invariant violations carry the invariant in the message") {
  RunConfig config;
  apply_config_kv(config, "omega-minus", "1.2");
  CHECK_THROWS_WITH_AS(config.validate(), "omega_minus must lie in (0,1)",
                       ConfigError);
}

TEST_CASE("flat files and their json mirror parse identically") {
  const fs::path dir = temp_dir();
  const std::string flat = (dir / "run.cfg").string();
  write_text_file(flat,
                  "# comment\n"
                  "problem = cantilever\n"
                  "method = dftr\n"
                  "sigma = 0.01\n"
                  "n = 1e5\n"
                  "x0 = 2.0, 3.0\n"
                  "omega-minus = 0.8\n");
  const RunConfig a = parse_config_file(flat);
  CHECK(a.method == "dftr");
  CHECK(a.sigma == 0.01);
  CHECK(a.n == 100000);
  CHECK(a.x0 == std::vector<double>{2.0, 3.0});
  CHECK(a.tr.omega_minus == 0.8);

  const std::string json = (dir / "run.json").string();
  write_text_file(json, effective_config_json(a).dump(2));
  const RunConfig b = parse_config_file(json);
  CHECK(effective_config_json(b).dump() == effective_config_json(a).dump());
}

TEST_CASE("effective config round-trips through its own serialization") {
  RunConfig config;
  apply_config_kv(config, "theta", "0.2");
  apply_config_kv(config, "seed", "99");
  apply_config_kv(config, "methods", "sf,dftr-r");
  const Json once = effective_config_json(config);
  const RunConfig reparsed = config_from_json(once);
  CHECK(effective_config_json(reparsed).dump() == once.dump());
  // defaults materialized: eps-star resolves to 0.1 * theta
  CHECK(once.at("eps-star").get<double>() == doctest::Approx(0.02));
}

TEST_CASE("malformed values name the key") {
  RunConfig config;
  CHECK_THROWS_AS(apply_config_kv(config, "sigma", "often"), ConfigError);
  CHECK_THROWS_AS(apply_config_kv(config, "n", "3.5"), ConfigError);
  CHECK_THROWS_AS(apply_config_kv(config, "quiet", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_config_kv(config, "acceptance", "sometimes"),
                  ConfigError);
}

TEST_CASE("cli: solve writes a result file and exits zero") {
  const fs::path dir = temp_dir();
  const std::string out = (dir / "result.json").string();
  const int code = cli({"solve", "--problem", "normal-tail", "--method",
                        "dftr-r", "--n", "500", "--seed", "7", "--m-points",
                        "8", "--eps-star", "0.05", "--max-outer", "30",
                        "--out", out, "--quiet", "true"});
  CHECK(code == 0);
  const Json doc = Json::parse(read_text_file(out));
  CHECK(doc.at("result").at("termination").is_string());
  CHECK(doc.at("config").at("method") == "dftr-r");
}

TEST_CASE("cli: invalid configuration exits 1 with the invariant named") {
  const int code = cli({"solve", "--problem", "normal-tail", "--omega-minus",
                        "1.2", "--quiet", "true"});
  CHECK(code == 1);
}

TEST_CASE("cli: repeated solves are byte-identical across worker counts") {
  const fs::path dir = temp_dir();
  const std::string out1 = (dir / "a.json").string();
  const std::string out4 = (dir / "b.json").string();
  const std::vector<std::string> base = {
      "solve", "--problem", "normal-tail", "--method", "dftr-r",
      "--n",   "2000",      "--seed",      "11",       "--m-points",
      "8",     "--eps-star", "0.05",       "--max-outer", "30",
      "--quiet", "true"};
  auto with = [&](const std::string& out, const std::string& workers) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(out);
    args.push_back("--workers");
    args.push_back(workers);
    return cli(args);
  };
  CHECK(with(out1, "1") == 0);
  CHECK(with(out4, "4") == 0);
  CHECK(read_text_file(out1) == read_text_file(out4));
}

TEST_CASE("cli: experiment dry run plans without computing") {
  const int code = cli({"experiment", "--methods", "sf,dftr-r", "--sigmas",
                        "0.1", "--ns", "1000", "--reps", "3", "--dry-run"});
  CHECK(code == 0);
}

TEST_CASE("cli: experiment writes per-run and summary CSVs") {
  const fs::path dir = temp_dir();
  // minimal benchmark fixture
  const std::string bench = (dir / "bench.json").string();
  write_text_file(bench,
                  R"({"entries":[{"sigma":0.1,"x":[1.93,2.27]}]})");
  const int code =
      cli({"experiment", "--methods", "dftr-r,sf", "--sigmas", "0.1", "--ns",
           "1000", "--reps", "3", "--seed-base", "100", "--eps-star", "0.08",
           "--m-points", "12", "--max-outer", "40", "--benchmark", bench,
           "--out-dir", dir.string(), "--quiet", "true"});
  CHECK(code == 0);
  const std::string runs = read_text_file((dir / "runs.csv").string());
  CHECK(std::count(runs.begin(), runs.end(), '\n') == 1 + 2 * 3);
  const std::string summary = read_text_file((dir / "summary.csv").string());
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 1 + 2);
  CHECK(summary.find("sigma,n_mc,method") == 0);
  const Json doc =
      Json::parse(read_text_file((dir / "experiment.json").string()));
  CHECK(doc.at("cells").size() == 2);
}

TEST_CASE("cli: list-problems prints the registry") {
  CHECK(cli({"list-problems"}) == 0);
}
