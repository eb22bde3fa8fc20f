#include <benchmark/benchmark.h>

#include "qgraph/enumerate.hpp"
#include "qgraph/oracle.hpp"

namespace {

void BM_Assemble(benchmark::State& state) {
  const auto g = qgraph::complete_graph(4);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::assemble(g, h));
}
BENCHMARK(BM_Assemble)->Arg(50)->Arg(200);

void BM_OracleEigs(benchmark::State& state) {
  const auto d = qgraph::assemble(qgraph::complete_graph(4), 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::oracle_eigs(d, 8));
}
BENCHMARK(BM_OracleEigs)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CrankNicolson(benchmark::State& state) {
  const auto d = qgraph::assemble(qgraph::complete_graph(4), 1.0 / 100);
  const qgraph::Vector u0 = qgraph::Vector::LinSpaced(static_cast<Eigen::Index>(d.dof_count()), 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(qgraph::crank_nicolson_dofs(d, u0, 1e-3, 1000, 1000));
}
BENCHMARK(BM_CrankNicolson)->Unit(benchmark::kMillisecond);

}  // namespace
