#include <benchmark/benchmark.h>

#include "imbal/dataset.hpp"
#include "imbal/resample.hpp"

namespace {

imbal::Dataset data(std::size_t n) {
  imbal::SynthSpec s;
  s.n = n;
  s.features = 8;
  s.informative = 4;
  s.ir_target = 9;
  s.class_sep = 1.0;
  s.seed = 2;
  return imbal::make_imbalanced(s);
}

void BM_Strategy(benchmark::State& state, imbal::StrategyId id) {
  const auto d = data(static_cast<std::size_t>(state.range(0)));
  imbal::ResampleConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(imbal::apply(id, d, cfg));
}
BENCHMARK_CAPTURE(BM_Strategy, smote, imbal::StrategyId::smote)->Arg(1000)->Arg(5000);
BENCHMARK_CAPTURE(BM_Strategy, smote_tl, imbal::StrategyId::smote_tl)->Arg(1000)->Arg(3000);
BENCHMARK_CAPTURE(BM_Strategy, smote_enn, imbal::StrategyId::smote_enn)->Arg(1000)->Arg(3000);
BENCHMARK_CAPTURE(BM_Strategy, smote_cnn, imbal::StrategyId::smote_cnn)->Arg(1000)->Arg(3000);
BENCHMARK_CAPTURE(BM_Strategy, smote_oss, imbal::StrategyId::smote_oss)->Arg(1000)->Arg(3000);

}  // namespace
