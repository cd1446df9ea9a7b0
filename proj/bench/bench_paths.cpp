// Throughput comparison between the OpenMP path kernels and their serial
// reference implementations. The two must agree bit for bit on every run;
// this harness checks that while timing them, so a speedup never comes at
// the price of a different answer.
//
// Usage: bench_paths [paths]   (default 2000000 for the counting kernel)

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/mcengine.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ht2d;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* label, std::uint64_t m, double serial_s, double parallel_s,
         bool identical) {
  std::printf("%-22s %10llu %10.3f %10.3f %8.2fx   %s\n", label,
              (unsigned long long)m, serial_s, parallel_s,
              serial_s / parallel_s, identical ? "identical" : "DIVERGED");
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t m =
      argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000ull;

  const auto pareto = UnivariateSpec::pareto(2.0, 1.0);
  const auto model =
      SequenceModel::blocks_independent({pareto, pareto}, {pareto, pareto});
  const auto weights = WeightModel::unit();

#ifdef _OPENMP
  const int workers = omp_get_max_threads();
#else
  const int workers = 1;
#endif
  std::printf("path kernels, %d worker(s)\n", workers);
  std::printf("%-22s %10s %10s %10s %9s\n", "kernel", "paths", "serial s",
              "openmp s", "speedup");

  {
    auto t0 = std::chrono::steady_clock::now();
    const auto serial =
        count_path_events_serial(model, weights, 20.0, 20.0, m, 1);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = count_path_events(model, weights, 20.0, 20.0, m, 1);
    const double tp = seconds_since(t0);
    row("event counting", m, ts, tp, serial == parallel);
  }

  {
    const std::uint64_t mc = m / 4;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial =
        conditional_estimator_serial(model, weights, 50.0, 50.0, mc, 1);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel =
        conditional_estimator(model, weights, 50.0, 50.0, mc, 1);
    const double tp = seconds_since(t0);
    row("conditional estimate", mc, ts, tp, serial == parallel);
  }

  std::printf(
      "note: speedups track the worker count; on a single core the two\n"
      "columns measure the same work plus scheduling overhead.\n");
  return 0;
}
