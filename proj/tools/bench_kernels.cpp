// Compares the serial reference kernels against the OpenMP kernels and
// checks that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "rbopt/cantilever.hpp"
#include "rbopt/kernels.hpp"
#include "rbopt/reliability.hpp"

using namespace rbopt;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

template <class F>
double time_best_of(int reps, F&& body) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    body();
    best = std::min(best, ms_since(start));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 2000000;
  std::printf("kernel benchmark, n = %lld, workers = %d\n",
              static_cast<long long>(n), kern::workers());

  const RngStream rng = RngStream::from_seed(7);
  std::vector<double> values(static_cast<std::size_t>(n));
  kern::map(n, [&](std::int64_t i) {
    auto eng = rng.engine(static_cast<std::uint64_t>(i));
    std::normal_distribution<double> nd;
    values[static_cast<std::size_t>(i)] = nd(eng);
  });

  // blocked reduction
  double sum_serial = 0.0, sum_par = 0.0;
  const double t_sum_serial = time_best_of(5, [&] {
    sum_serial = kern::block_sum_serial(
        n, [&](std::int64_t i) { return values[static_cast<std::size_t>(i)]; });
  });
  const double t_sum_par = time_best_of(5, [&] {
    sum_par = kern::block_sum(
        n, [&](std::int64_t i) { return values[static_cast<std::size_t>(i)]; });
  });
  std::printf("block_sum      serial %8.2f ms   omp %8.2f ms   speedup %.2fx  %s\n",
              t_sum_serial, t_sum_par, t_sum_serial / t_sum_par,
              sum_serial == sum_par ? "bit-identical" : "MISMATCH");

  // gaussian sampling + limit state map, end to end
  CantileverConfig cfg;
  const RboProblem problem = cantilever_problem(cfg);
  Vec x(2);
  x << 2.0, 3.0;

  Mat samples;
  const double t_sample = time_best_of(3, [&] {
    samples = problem.dist->sample(x, n, rng.child(1));
  });
  Vec g_par(n), g_serial(n);
  const double t_g_serial = time_best_of(3, [&] {
    kern::map_serial(n, [&](std::int64_t i) {
      g_serial[i] = problem.limit.value(samples.row(i).transpose());
    });
  });
  const double t_g_par = time_best_of(3, [&] {
    kern::map(n, [&](std::int64_t i) {
      g_par[i] = problem.limit.value(samples.row(i).transpose());
    });
  });
  bool identical = true;
  for (std::int64_t i = 0; i < n; ++i)
    if (g_par[i] != g_serial[i]) identical = false;
  std::printf("limit_state    serial %8.2f ms   omp %8.2f ms   speedup %.2fx  %s\n",
              t_g_serial, t_g_par, t_g_serial / t_g_par,
              identical ? "bit-identical" : "MISMATCH");
  std::printf("sampling       omp    %8.2f ms\n", t_sample);

  // full evaluation end to end
  EvalCounters counters;
  ReliabilityEvaluation eval;
  const double t_full = time_best_of(3, [&] {
    eval = full_evaluation(problem, x, n, rng.child(2), counters);
  });
  std::printf("full_eval      omp    %8.2f ms   (p_hat = %.6g)\n", t_full,
              eval.p_hat);

  // reweighted evaluation
  Vec x_shift(2);
  x_shift << 2.05, 3.05;
  ReweightedEstimate est;
  const double t_rw = time_best_of(3, [&] {
    est = reweighted_evaluation(eval, *problem.dist, x_shift, counters);
  });
  std::printf("reweighted     omp    %8.2f ms   (p_hat = %.6g, ess = %.3g)\n",
              t_rw, est.p_hat, est.ess);
  return 0;
}
