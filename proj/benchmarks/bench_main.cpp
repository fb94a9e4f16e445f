#include <benchmark/benchmark.h>

#include "cubex/covers.hpp"
#include "cubex/graph_of_complexes.hpp"
#include "cubex/hyperplanes.hpp"
#include "cubex/pipeline.hpp"
#include "cubex/text_io.hpp"

namespace {

using namespace cubex;

std::string data(const char* name) { return std::string(CUBEX_BENCH_DATA) + "/" + name; }

ComplexPtr load_complex(const char* file, const char* name) {
  Workspace ws;
  ws.load_file(data(file));
  return ws.complex(name);
}

// Cyclic cover of the torus of the given degree, unwrapping a.
ComplexPtr torus_cover(std::size_t degree) {
  const ComplexPtr t = load_complex("torus.cux", "torus");
  VoltageAssignment v = VoltageAssignment::trivial(*t, degree);
  for (std::uint32_t s = 0; s < degree; ++s) v.perms[0][s] = (s + 1) % degree;
  return build_cover(t, v).total;
}

void BM_CheckSpecialTorusCover(benchmark::State& state) {
  const ComplexPtr x = torus_cover(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_special(*x).special);
  state.counters["squares"] = static_cast<double>(x->square_count());
}
BENCHMARK(BM_CheckSpecialTorusCover)->RangeMultiplier(4)->Range(4, 256);

void BM_EnumerateRoseCovers(benchmark::State& state) {
  const ComplexPtr r = load_complex("rose.cux", "rose");
  const auto max_degree = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    std::size_t n = 0;
    for_each_cover(*r, max_degree, [&](const VoltageAssignment&) {
      ++n;
      return true;
    });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateRoseCovers)->DenseRange(2, 5);

void BM_TotalSpace(benchmark::State& state) {
  const GraphOfComplexes g = load_goc(data("double-aab.goc"));
  for (auto _ : state) benchmark::DoNotOptimize(total_space(g).complex);
}
BENCHMARK(BM_TotalSpace);

void BM_SpecializeDouble(benchmark::State& state) {
  const GraphOfComplexes g = load_goc(data("double-aab.goc"));
  for (auto _ : state) benchmark::DoNotOptimize(specialize(g).ok());
}
BENCHMARK(BM_SpecializeDouble)->Unit(benchmark::kMillisecond);

void BM_SpecializeMonodromy(benchmark::State& state) {
  const GraphOfComplexes g = load_goc(data("rose-swap.goc"));
  for (auto _ : state) benchmark::DoNotOptimize(specialize(g).ok());
}
BENCHMARK(BM_SpecializeMonodromy)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
