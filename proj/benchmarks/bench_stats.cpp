#include <benchmark/benchmark.h>

#include <random>

#include "imbench/rank_stats.hpp"

namespace {

using namespace imbench;

void BM_WilcoxonExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.1, 1.0);
  std::vector<double> a(n), b(n, 0.0);
  for (auto& v : a) v = noise(rng);
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact));
}
BENCHMARK(BM_WilcoxonExact)->Arg(8)->Arg(12)->Arg(30);

void BM_RankAnalysis(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  BlockMatrix m;
  m.values = Matrix::Random(45, k);
  for (Eigen::Index j = 0; j < k; ++j) m.treatments.push_back("t" + std::to_string(j));
  for (int i = 0; i < 45; ++i) m.blocks.push_back("b" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(rank_analysis(m));
}
BENCHMARK(BM_RankAnalysis)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
