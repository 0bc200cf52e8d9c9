#include <benchmark/benchmark.h>

#include "imbal/dataset.hpp"
#include "imbal/forest.hpp"

namespace {

void BM_TrainForest(benchmark::State& state) {
  imbal::SynthSpec s;
  s.n = static_cast<std::size_t>(state.range(0));
  s.features = 10;
  s.informative = 5;
  s.ir_target = 9;
  s.class_sep = 1.0;
  s.seed = 3;
  const auto d = imbal::make_imbalanced(s);
  imbal::ForestConfig cfg;
  cfg.n_trees = 100;
  cfg.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(imbal::train_forest(d, cfg));
}
BENCHMARK(BM_TrainForest)->Args({1000, 1})->Args({1000, 4})->Args({5000, 4})->Unit(benchmark::kMillisecond);

}  // namespace
