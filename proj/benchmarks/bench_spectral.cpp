#include <benchmark/benchmark.h>

#include "qgraph/enumerate.hpp"
#include "qgraph/spectral.hpp"

namespace {

qgraph::MetricGraph two_speed_cycle(std::size_t n) {
  qgraph::RawGraph raw = qgraph::cycle_graph(n).to_raw();
  for (std::size_t j = 0; j < raw.edges.size(); ++j) raw.edges[j].c = j % 2 ? 4.0 : 1.0;
  return qgraph::validate(raw);
}

void BM_GeneralizedLaplacian(benchmark::State& state) {
  const auto g = qgraph::complete_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::generalized_laplacian(g, 2.345));
}
BENCHMARK(BM_GeneralizedLaplacian)->Arg(4)->Arg(8)->Arg(16);

void BM_UnitSpeedSpectrum(benchmark::State& state) {
  const auto g = qgraph::complete_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::unit_speed_spectrum(g, 400.0));
}
BENCHMARK(BM_UnitSpeedSpectrum)->Arg(4)->Arg(8);

void BM_SecularSpectrum(benchmark::State& state) {
  const auto g = two_speed_cycle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::secular_spectrum(g, 100.0));
}
BENCHMARK(BM_SecularSpectrum)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SecularScanJobs(benchmark::State& state) {
  const auto g = two_speed_cycle(8);
  const qgraph::ScanOptions opts{{}, static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::scan_sigma_L(g, 400.0, opts));
}
BENCHMARK(BM_SecularScanJobs)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
