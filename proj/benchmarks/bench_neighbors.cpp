#include <benchmark/benchmark.h>

#include "imbal/dataset.hpp"
#include "imbal/neighbors.hpp"
#include "imbal/profile.hpp"

namespace {

imbal::Dataset data(std::size_t n, std::size_t p) {
  imbal::SynthSpec s;
  s.n = n;
  s.features = p;
  s.informative = p;
  s.ir_target = 9;
  s.seed = 1;
  return imbal::make_imbalanced(s);
}

void BM_KnnQueries(benchmark::State& state) {
  const auto d = data(static_cast<std::size_t>(state.range(0)), 8);
  const auto idx = imbal::NeighborIndex::from_dataset(d);
  for (auto _ : state) {
    for (std::size_t i = 0; i < d.rows(); i += 10) benchmark::DoNotOptimize(idx.neighbors_of(i, 5));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.rows() / 10));
}
BENCHMARK(BM_KnnQueries)->Arg(500)->Arg(2000)->Arg(8000);

void BM_Mst(benchmark::State& state) {
  const auto d = data(static_cast<std::size_t>(state.range(0)), 8);
  const auto idx = imbal::NeighborIndex::from_dataset(d);
  for (auto _ : state) benchmark::DoNotOptimize(imbal::build_mst(idx));
}
BENCHMARK(BM_Mst)->Arg(500)->Arg(2000)->Arg(5000);

void BM_Profile(benchmark::State& state) {
  const auto d = data(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(imbal::profile(d));
}
BENCHMARK(BM_Profile)->Arg(1000)->Arg(5000);

}  // namespace
