// Brute-force failure-probability reference for the cantilever problem,
// deliberately built on a different random-number path than the library
// (32-bit mt19937 + explicit Box-Muller instead of the 64-bit stream/engine
// scheme), so fixture values cross-check the production sampler.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "rbopt/cantilever.hpp"
#include "rbopt/serialize.hpp"

using namespace rbopt;

namespace {

double box_muller(std::mt19937& eng, bool& have_spare, double& spare) {
  if (have_spare) {
    have_spare = false;
    return spare;
  }
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double u1 = 0.0;
  do {
    u1 = ud(eng);
  } while (u1 <= 1e-300);
  const double u2 = ud(eng);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare = radius * std::sin(angle);
  have_spare = true;
  return radius * std::cos(angle);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 7) {
    std::fprintf(stderr,
                 "usage: reference_mc <w> <t> <sigma> <n> <seed> <out.json>\n");
    return 1;
  }
  const double w = std::atof(argv[1]);
  const double t = std::atof(argv[2]);
  const double sigma = std::atof(argv[3]);
  const long long n = std::atoll(argv[4]);
  const unsigned seed = static_cast<unsigned>(std::atoll(argv[5]));
  const std::string out = argv[6];

  CantileverConfig cfg;
  cfg.sigma_wt = sigma;

  std::mt19937 eng(seed);
  bool have_spare = false;
  double spare = 0.0;
  auto normal = [&] { return box_muller(eng, have_spare, spare); };

  long long failures = 0;
  Vec z(5);
  for (long long i = 0; i < n; ++i) {
    z[0] = cfg.e_mean + cfg.e_sd * normal();
    z[1] = cfg.load_mean + cfg.load_sd * normal();
    z[2] = cfg.load_mean + cfg.load_sd * normal();
    z[3] = w + sigma * normal();
    z[4] = t + sigma * normal();
    if (cantilever_g(cfg, z) < 0.0) ++failures;
  }
  const double p = static_cast<double>(failures) / static_cast<double>(n);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));

  Json entry;
  entry["w"] = w;
  entry["t"] = t;
  entry["sigma"] = sigma;
  entry["n"] = n;
  entry["seed"] = seed;
  entry["p"] = p;
  entry["std_err"] = se;
  entry["generator"] = "mt19937-32 + box-muller";

  Json doc;
  doc["entries"] = Json::array();
  try {
    doc = Json::parse(read_text_file(out));
  } catch (const std::exception&) {
  }
  Json entries = Json::array();
  for (const Json& existing : doc["entries"]) {
    const bool same = std::abs(existing.at("w").get<double>() - w) < 1e-12 &&
                      std::abs(existing.at("t").get<double>() - t) < 1e-12 &&
                      std::abs(existing.at("sigma").get<double>() - sigma) <
                          1e-12;
    if (!same) entries.push_back(existing);
  }
  entries.push_back(std::move(entry));
  doc["entries"] = std::move(entries);
  write_text_file(out, doc.dump(2) + "\n");

  std::printf("p(%g, %g; sigma=%g) = %.8g +- %.3g  (n = %lld) -> %s\n", w, t,
              sigma, p, se, n, out.c_str());
  return 0;
}
