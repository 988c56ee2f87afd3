// Benchmark comparing the OpenMP kernels against the serial reference
// implementations: axis derivatives, the deterministic reduction, and two
// composite pipelines (Christoffel symbols, gv evaluation).
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gvlab/gv_core.hpp"
#include "gvlab/kernels.hpp"
#include "gvlab/scenarios.hpp"

using namespace gvlab;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    best = std::min(best,
                    std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-24s %10.4f ms %10.4f ms   x%.2f\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 96;
  if (argc > 1) n = std::max(16, std::atoi(argv[1]));
#ifdef _OPENMP
  std::printf("grid %d^3, OpenMP max threads: %d\n", n, omp_get_max_threads());
#else
  std::printf("grid %d^3, OpenMP: disabled\n", n);
#endif
  std::printf("%-24s %13s %13s %7s\n", "kernel", "serial", "openmp",
              "speedup");

  ChartGrid g = torus_grid(n);
  ScalarField f = make_scalar(g, [](double x, double y, double z) {
    return std::sin(x) * std::cos(2 * y) + std::sin(z + x);
  });
  std::vector<double> out(f.v.size());

  for (int axis = 0; axis < 3; ++axis) {
    const std::string name = "derivative axis " + std::to_string(axis + 1);
    const double ts = time_best_of(
        3, [&] { ref::derivative_axis_serial(g, f.v.data(), out.data(), axis); });
    const double tp = time_best_of(
        3, [&] { derivative_axis(g, f.v.data(), out.data(), axis); });
    report(name.c_str(), ts, tp);
  }

  {
    volatile double sink = 0.0;
    const double ts =
        time_best_of(5, [&] { sink = ref::deterministic_sum_serial(f.v); });
    const double tp = time_best_of(5, [&] { sink = deterministic_sum(f.v); });
    (void)sink;
    report("deterministic sum", ts, tp);
  }

  // Composite pipelines exercise the pointwise loops and reductions of the
  // production path; serial timing caps OpenMP at one thread.
  const Scenario& sc = find_scenario("tilted");
  CompatiblePair cp = sc.build({n, n, n});
  {
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    const double ts = time_best_of(2, [&] { (void)christoffel(cp.g); });
    const double ts_gv = time_best_of(2, [&] { (void)gv_direct(cp.dp); });
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
    const double tp = time_best_of(2, [&] { (void)christoffel(cp.g); });
    const double tp_gv = time_best_of(2, [&] { (void)gv_direct(cp.dp); });
    report("christoffel pipeline", ts, tp);
    report("gv_direct pipeline", ts_gv, tp_gv);
  }

  // Cross-check: the two implementations agree bitwise.
  std::vector<double> a(f.v.size()), b(f.v.size());
  derivative_axis(g, f.v.data(), a.data(), 1);
  ref::derivative_axis_serial(g, f.v.data(), b.data(), 1);
  const bool same = a == b &&
                    deterministic_sum(f.v) == ref::deterministic_sum_serial(f.v);
  std::printf("bitwise agreement: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
