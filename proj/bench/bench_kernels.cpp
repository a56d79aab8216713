// Serial reference against the OpenMP kernel for each parallel routine.
// Usage: bench_kernels [repeats]
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <omp.h>

#include "fillgeo/disk_polygon.hpp"
#include "fillgeo/dual_graph.hpp"
#include "fillgeo/explore.hpp"
#include "fillgeo/hypgeo.hpp"

using namespace fillgeo;
using Clock = std::chrono::steady_clock;

namespace {

int repeats = 3;

template <class F>
double best_ms(F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

template <class S, class P>
void row(const char* name, S&& serial, P&& parallel) {
  const double s = best_ms(serial), p = best_ms(parallel);
  std::printf("%-28s %12.2f %12.2f %8.2fx\n", name, s, p, s / p);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) repeats = std::max(1, std::atoi(argv[1]));
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

  row("enumerate n=7", [] { enumerate_serial(7); }, [] { enumerate(7); });

  // Densest spread tree count among the seven-square complexes.
  const auto census = enumerate(7);
  const auto densest = std::max_element(census.begin(), census.end(), [](const auto& a, const auto& b) {
    return a.spread_trees < b.spread_trees;
  });
  const DualGraph g(densest->complex);
  row("spread trees (densest n=7)", [&] { enumerate_spread_trees(g, 10'000'000); },
      [&] { enumerate_spread_trees_parallel(g, 10'000'000); });

  row("split sweep to 2000", [] { hyp::proposition_sweep(2000); },
      [] { hyp::proposition_sweep_parallel(2000); });

  const double area = 4 * std::numbers::pi;
  row("bezdek 12-gon, 20000 trials", [&] { disk::bezdek_spot_check(12, area, 20000, 1); },
      [&] { disk::bezdek_spot_check_parallel(12, area, 20000, 1); });
  return 0;
}
