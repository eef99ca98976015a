// Serial reference against the OpenMP kernels. Set OMP_NUM_THREADS to vary the
// thread count; on one core the two should match within noise.
#include <benchmark/benchmark.h>

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/glue.hpp"
#include "bubbleforge/potential.hpp"
#include "bubbleforge/scan.hpp"

using namespace bubbleforge;

namespace {

const Field& two_bubbles() {
  static const Field f =
      sum_field(bubble_field(Bubble(0.3, Vec{1, 0, 0})), bubble_field(Bubble(1.0, Vec{-1, 0, 0})));
  return f;
}

RegionGrid box_grid(int m) {
  return region_grid(BoxRegion{Vec{-3, -3, -3}, Vec{3, 3, 3}}, 3, GridSpec{m, 2, {}, false});
}

void scan(benchmark::State& st, bool parallel) {
  const RegionGrid rg = box_grid(static_cast<int>(st.range(0)));
  const Objective obj = [](const Vec& x) { return std::abs(k_function(two_bubbles(), x) - 1.0); };
  for (auto _ : st) {
    const ScanHit h = parallel ? scan_max_parallel(rg.grid, rg.map, obj) : scan_max_serial(rg.grid, rg.map, obj);
    benchmark::DoNotOptimize(h.value);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(rg.grid.size()));
}

void quad(benchmark::State& st, bool parallel) {
  const Vec o = Vec::zeros(3);
  const Field u = glue_concentric({Bubble(0.0099, o), Bubble(1.0, o), 1.0, 10.0});
  QuadOptions opt;
  opt.parallel = parallel;
  opt.angular_points = static_cast<int>(st.range(0));
  opt.radial_breaks = {1.0, 10.0};
  const Kernel k{Dim(3)};
  for (auto _ : st) benchmark::DoNotOptimize(weighted_grad_integral(k, u, {o, 10.0}, Vec{0.3, 0, 0}, opt).value);
}

}  // namespace

BENCHMARK_CAPTURE(scan, serial, false)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(scan, parallel, true)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(quad, serial, false)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(quad, parallel, true)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
