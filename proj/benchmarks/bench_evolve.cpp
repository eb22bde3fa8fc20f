#include <benchmark/benchmark.h>

#include <random>

#include "qgraph/enumerate.hpp"
#include "qgraph/evolve.hpp"

namespace {

void BM_EigenBasis(benchmark::State& state) {
  const auto g = qgraph::complete_graph(4);
  const auto report = qgraph::spectrum(g, 1600.0);
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::EigenBasis(g, report, 501));
}
BENCHMARK(BM_EigenBasis)->Unit(benchmark::kMillisecond);

void BM_HeatSnapshot(benchmark::State& state) {
  const auto g = qgraph::complete_graph(4);
  const qgraph::EigenBasis basis(g, qgraph::spectrum(g, 1600.0), 501);
  const qgraph::Vector c = basis.project(qgraph::bump_state(g, 501, 0));
  for (auto _ : state) benchmark::DoNotOptimize(basis.synthesize(qgraph::heat_coefficients(basis, c, 0.1)));
}
BENCHMARK(BM_HeatSnapshot);

void BM_SupNorm(benchmark::State& state) {
  const auto g = qgraph::complete_graph(3);
  const qgraph::EigenBasis basis(g, qgraph::spectrum(g, 400.0), 501);
  std::mt19937_64 rng(1);
  const qgraph::Vector c = qgraph::random_coefficients(basis, rng);
  for (auto _ : state) benchmark::DoNotOptimize(basis.sup_norm(c));
}
BENCHMARK(BM_SupNorm);

}  // namespace
