#include <benchmark/benchmark.h>

#include "imbal/random.hpp"
#include "imbal/rules.hpp"

namespace {

void BM_Apriori(benchmark::State& state) {
  imbal::Rng rng(4);
  std::vector<imbal::ItemSet> t(static_cast<std::size_t>(state.range(0)));
  for (auto& row : t) {
    // Five features with five bins each plus one of eight labels.
    for (imbal::Item f = 0; f < 5; ++f) row.push_back(f * 16 + static_cast<imbal::Item>(rng.below(5)));
    row.push_back(80 + static_cast<imbal::Item>(rng.below(8)));
  }
  for (auto _ : state) {
    const auto fs = imbal::apriori(t, 0.05);
    benchmark::DoNotOptimize(
        imbal::generate_rules(fs, 0.9, [](imbal::Item i) { return i >= 80; }));
  }
}
BENCHMARK(BM_Apriori)->Arg(40)->Arg(400)->Arg(4000);

}  // namespace
