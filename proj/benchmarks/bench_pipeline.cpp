#include <random>

#include <benchmark/benchmark.h>

#include "parnet/pipeline.hpp"
#include "parnet/synth.hpp"

using namespace parnet;

namespace {

Dataset bench_dataset(std::size_t n) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.fraud_fraction = 0.1;
  cfg.seed = 1;
  return generate(cfg);
}

BinaryNetwork random_graph(double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BinaryNetwork g;
  g.k = kFeatureCount;
  g.adj.assign(static_cast<std::size_t>(g.k) * g.k, 0);
  for (int i = 0; i < g.k; ++i) {
    for (int j = i + 1; j < g.k; ++j) {
      if (u(rng) < p) {
        g.adj[static_cast<std::size_t>(i) * g.k + j] = 1;
        g.adj[static_cast<std::size_t>(j) * g.k + i] = 1;
      }
    }
  }
  return g;
}

void BM_BuildNetworks(benchmark::State& state) {
  auto ds = bench_dataset(static_cast<std::size_t>(state.range(0)));
  auto model = fit_pipeline_baseline(ds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_networks(ds, model));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildNetworks)->Arg(100)->Arg(1000);

void BM_ExtractTopo(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<BinaryNetwork> graphs;
  for (int i = 0; i < 256; ++i) graphs.push_back(random_graph(0.4, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_all(graphs[i++ % graphs.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExtractTopo);

void BM_FitBaseline(benchmark::State& state) {
  auto ds = bench_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_pipeline_baseline(ds));
  }
}
BENCHMARK(BM_FitBaseline)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
