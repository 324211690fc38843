#include <benchmark/benchmark.h>

#include <vector>

#include "streamtree/generators.h"
#include "streamtree/leaf_predictors.h"
#include "streamtree/olboost.h"
#include "streamtree/rng.h"
#include "streamtree/sufficient_stats.h"
#include "streamtree/tree.h"

namespace st = streamtree;

namespace {

std::vector<st::Instance> Materialize(const st::GeneratorConfig& cfg) {
  auto stream = st::Generate(cfg);
  std::vector<st::Instance> out;
  st::Instance inst;
  while (stream->Next(inst)) out.push_back(inst);
  return out;
}

void TrainTree(benchmark::State& state, st::GeneratorFamily family, bool olboost) {
  auto cfg = st::GeneratorConfig::Defaults(family);
  cfg.length = 20000;
  const auto data = Materialize(cfg);
  const auto schema = st::GeneratorSchema(cfg);
  st::TreeConfig tc;
  tc.olboost.enabled = olboost;
  for (auto _ : state) {
    st::HoeffdingTree tree(schema, tc);
    for (const auto& inst : data) {
      benchmark::DoNotOptimize(tree.Predict(inst.values));
      tree.Train(inst);
    }
    benchmark::DoNotOptimize(tree.Stats().node_count);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.size()));
}

void BM_PrequentialSea(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kSea, false); }
void BM_PrequentialSeaOlboost(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kSea, true); }
void BM_PrequentialRbf(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kRbf, false); }
void BM_PrequentialRbfOlboost(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kRbf, true); }
void BM_PrequentialLed(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kLed, false); }
void BM_PrequentialLedOlboost(benchmark::State& s) { TrainTree(s, st::GeneratorFamily::kLed, true); }

BENCHMARK(BM_PrequentialSea)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrequentialSeaOlboost)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrequentialRbf)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrequentialRbfOlboost)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrequentialLed)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrequentialLedOlboost)->Unit(benchmark::kMillisecond);

void BM_Poisson(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0)) / 2.0;
  st::Rng rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(st::SampleWeight(lambda, rng));
}
BENCHMARK(BM_Poisson)->Arg(1)->Arg(13)->Arg(24);

void BM_NaiveBayesPredict(benchmark::State& state) {
  auto cfg = st::GeneratorConfig::Defaults(st::GeneratorFamily::kRbf);
  cfg.length = 2000;
  const auto data = Materialize(cfg);
  const auto schema = st::GeneratorSchema(cfg);
  st::ClassDistribution dist(schema.num_classes());
  auto observers = st::MakeObservers(schema);
  for (const auto& inst : data) {
    dist.Add(inst.label, 1.0);
    for (std::size_t f = 0; f < observers.size(); ++f) {
      observers[f].Observe(inst.values[f], inst.label, 1.0);
    }
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        st::NaiveBayesPredict(dist, observers, data[i++ % data.size()].values));
  }
}
BENCHMARK(BM_NaiveBayesPredict);

}  // namespace
BENCHMARK_MAIN();
