#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "boxlat/data.hpp"
#include "boxlat/query.hpp"
#include "boxlat/random.hpp"
#include "boxlat/train.hpp"

using namespace boxlat;

namespace {

Box random_box(Rng& rng, std::size_t dim) {
  std::vector<double> mins(dim), deltas(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mins[i] = rng.uniform(0.0, 0.5);
    deltas[i] = rng.uniform(0.1, 0.5);
  }
  return Box(std::move(mins), std::move(deltas));
}

void BM_UnionVolume(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < n; ++i) boxes.push_back(random_box(rng, 10));
  const auto m = ProductMeasure::uniform(10);
  for (auto _ : state) benchmark::DoNotOptimize(union_volume(boxes, m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UnionVolume)->DenseRange(2, 14, 4);

void BM_BatchLoss(benchmark::State& state) {
  Rng rng(2);
  TrainConfig cfg;
  const std::size_t concepts = 2000;
  InitSpec init;
  const BoxParams params = initialize(concepts, cfg, init);
  std::vector<TrainExample> batch;
  for (std::size_t i = 0; i < cfg.batch_size; ++i) {
    batch.push_back(TrainExample::pair(rng.index(concepts), rng.index(concepts), rng.coin() ? 1.0 : 0.0));
  }
  const auto m = cfg.make_measure();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_loss(params, m, batch, cfg).loss);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_BatchLoss)->Unit(benchmark::kMillisecond);

void BM_TransitiveClosure(benchmark::State& state) {
  const Hierarchy h = read_hierarchy(std::string(BOXLAT_DATA_DIR) + "/wordnet_artifact_edges.tsv");
  for (auto _ : state) benchmark::DoNotOptimize(transitive_closure(h).edges.size());
}
BENCHMARK(BM_TransitiveClosure)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
