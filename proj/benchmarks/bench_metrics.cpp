#include <benchmark/benchmark.h>

#include <random>

#include "imbench/eval.hpp"
#include "imbench/imbalance.hpp"
#include "imbench/losses.hpp"
#include "imbench/weighting.hpp"

namespace {

using namespace imbench;

Labels random_labels(std::size_t n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, k - 1);
  Labels y(n);
  for (auto& v : y) v = pick(rng);
  return y;
}

void BM_ImbalanceReport(benchmark::State& state) {
  const auto y = random_labels(static_cast<std::size_t>(state.range(0)), 10, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(imbalance_report(class_frequencies(y)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImbalanceReport)->Arg(1 << 10)->Arg(1 << 16);

void BM_EffectiveWeights(benchmark::State& state) {
  const auto dist = LabelDistribution::of(random_labels(10000, static_cast<int>(state.range(0)), 2),
                                          static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(weights_effective(dist, kDefaultEffectiveBeta));
}
BENCHMARK(BM_EffectiveWeights)->Arg(2)->Arg(100);

void BM_WeightedCce(benchmark::State& state) {
  const int k = 10;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = random_labels(n, k, 3);
  const Matrix p = softmax(Matrix::Random(static_cast<Eigen::Index>(n), k));
  const ClassWeights w = weights_inverse(LabelDistribution::of(y, k));
  for (auto _ : state) benchmark::DoNotOptimize(weighted_cce(y, p, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeightedCce)->Arg(128)->Arg(4096);

void BM_F1Scores(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = random_labels(n, 10, 4);
  const auto p = random_labels(n, 10, 5);
  for (auto _ : state) benchmark::DoNotOptimize(f1_scores(confusion(y, p, 10)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_F1Scores)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace
