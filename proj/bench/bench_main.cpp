// Benchmark: the bucketed sampler against the per-agent reference engine, and
// the parallel kernels against their single-thread runs. Parallel results are
// asserted identical to the serial ones before a timing is reported.
//
// Usage: scrip_bench [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "scrip/chain.hpp"
#include "scrip/equilibrium.hpp"
#include "scrip/experiments.hpp"
#include "scrip/parallel.hpp"
#include "scrip/simulation.hpp"

using namespace scrip;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double other, const char* otherLabel) {
  std::printf("%-34s %10.3fs %10.3fs   %s speedup %.2fx\n", name, serial, other, otherLabel,
              serial / other);
}

void bench_engines(int n, double beta, std::int64_t rounds) {
  GameParams params(n, 0.95, 0.1, beta, 2LL * n);
  auto kinds = uniform_population(n, 5.0);

  auto t0 = std::chrono::steady_clock::now();
  SystemState state{0, even_balances(n, params.money),
                    std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  RngStreams streams = RngStreams::from_seed(1);
  for (std::int64_t t = 0; t < rounds; ++t) simulate_round(state, kinds, params, streams);
  double refSecs = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  FastEngine fast(params, kinds, even_balances(n, params.money), 1);
  for (std::int64_t t = 0; t < rounds; ++t) fast.step();
  double fastSecs = seconds_since(t0);

  char name[64];
  std::snprintf(name, sizeof name, "engine n=%d beta=%.2f (%lld rounds)", n, beta,
                static_cast<long long>(rounds));
  report(name, refSecs, fastSecs, "bucketed");
}

void bench_concentration(int n) {
  parallel::set_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  ConcentrationResult serial = concentration_fraction(2, n, 1.0, 0.05);
  double serialSecs = seconds_since(t0);

  parallel::set_threads(0);
  parallel::set_threads(parallel::max_threads());
  t0 = std::chrono::steady_clock::now();
  ConcentrationResult par = concentration_fraction(2, n, 1.0, 0.05);
  double parSecs = seconds_since(t0);

  if (serial.outside != par.outside || serial.total != par.total) {
    std::printf("concentration results diverged between thread counts\n");
    std::exit(1);
  }
  char name[64];
  std::snprintf(name, sizeof name, "state scan k=2 n=%d (%llu states)", n,
                static_cast<unsigned long long>(serial.total));
  report(name, serialSecs, parSecs, "omp");
}

void bench_power_iteration(int n) {
  ChainStateSpace space = enumerate_states(2, n, n);
  SparseMatrix matrix = transition_matrix(space, 0.5);

  parallel::set_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  StationaryResult serial = stationary_distribution(matrix);
  double serialSecs = seconds_since(t0);

  parallel::set_threads(parallel::max_threads());
  t0 = std::chrono::steady_clock::now();
  StationaryResult par = stationary_distribution(matrix);
  double parSecs = seconds_since(t0);

  if (serial.pi != par.pi) {
    std::printf("stationary distributions diverged between thread counts\n");
    std::exit(1);
  }
  char name[64];
  std::snprintf(name, sizeof name, "power iteration (%zu states)", space.size());
  report(name, serialSecs, parSecs, "omp");
}

void bench_curve(double delta, int gammaMax) {
  GameParams params(1000, delta, 0.1, 1.0, 3000);
  parallel::set_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  BrCurve serial = compute_br_curve(params, gammaMax);
  double serialSecs = seconds_since(t0);

  parallel::set_threads(parallel::max_threads());
  t0 = std::chrono::steady_clock::now();
  BrCurve par = compute_br_curve(params, gammaMax);
  double parSecs = seconds_since(t0);

  for (int g = 0; g <= gammaMax; ++g)
    if (!(serial.at(g) == par.at(g))) {
      std::printf("response curves diverged between thread counts\n");
      std::exit(1);
    }
  char name[64];
  std::snprintf(name, sizeof name, "response curve delta=%.2f (0..%d)", delta, gammaMax);
  report(name, serialSecs, parSecs, "omp");
}

void bench_seed_sweep(int n, std::int64_t rounds, int seeds) {
  GameParams params(n, 0.95, 0.1, 1.0, 2LL * n);
  std::vector<std::uint64_t> seedList(static_cast<std::size_t>(seeds));
  for (int i = 0; i < seeds; ++i) seedList[static_cast<std::size_t>(i)] = i + 1;

  parallel::set_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  ConvergenceSeries serial = convergence_series(params, 5, rounds, rounds / 10, seedList);
  double serialSecs = seconds_since(t0);

  parallel::set_threads(parallel::max_threads());
  t0 = std::chrono::steady_clock::now();
  ConvergenceSeries par = convergence_series(params, 5, rounds, rounds / 10, seedList);
  double parSecs = seconds_since(t0);

  if (serial.meanSq != par.meanSq) {
    std::printf("seed sweeps diverged between thread counts\n");
    std::exit(1);
  }
  char name[64];
  std::snprintf(name, sizeof name, "seed sweep n=%d x%d seeds", n, seeds);
  report(name, serialSecs, parSecs, "omp");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("threads available: %d (openmp %s)\n\n", parallel::max_threads(),
              parallel::enabled() ? "on" : "off");
  std::printf("%-34s %11s %11s\n", "benchmark", "reference", "optimized");

  if (quick) {
    bench_engines(500, 1.0, 20'000);
    bench_engines(500, 0.05, 20'000);
    bench_concentration(10);
    bench_power_iteration(6);
    bench_curve(0.85, 10);
    bench_seed_sweep(500, 2'000, 4);
  } else {
    bench_engines(2000, 1.0, 200'000);
    bench_engines(2000, 0.05, 50'000);
    bench_engines(10000, 1.0, 200'000);
    bench_concentration(12);
    bench_power_iteration(8);
    bench_curve(0.95, 20);
    bench_seed_sweep(1000, 4'000, 10);
  }
  return 0;
}
