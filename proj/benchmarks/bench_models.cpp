#include <benchmark/benchmark.h>

#include "imbench/dataset.hpp"
#include "imbench/forest.hpp"
#include "imbench/gbt.hpp"
#include "imbench/tabresnet.hpp"
#include "imbench/tree.hpp"

namespace {

using namespace imbench;

Dataset make_data(std::size_t n, int k = 5, int d = 10) {
  SynthConfig cfg;
  cfg.n_samples = n;
  cfg.n_classes = k;
  cfg.n_features = d;
  cfg.power_law_exponent = 1.0;
  cfg.seed = 7;
  return synth_generate(cfg);
}

void BM_DecisionTreeFit(benchmark::State& state) {
  const Dataset data = make_data(static_cast<std::size_t>(state.range(0)));
  const ClassWeights w = weights_none(data.n_classes());
  for (auto _ : state) benchmark::DoNotOptimize(dt_fit(data, TreeParams{}, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DecisionTreeFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_RandomForestFit(benchmark::State& state) {
  const Dataset data = make_data(static_cast<std::size_t>(state.range(0)));
  const ClassWeights w = weights_none(data.n_classes());
  ForestParams p;
  p.n_estimators = 20;
  for (auto _ : state) benchmark::DoNotOptimize(rf_fit(data, p, w, 1));
}
BENCHMARK(BM_RandomForestFit)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GbtFit(benchmark::State& state) {
  const Dataset data = make_data(static_cast<std::size_t>(state.range(0)));
  const ClassWeights w = weights_none(data.n_classes());
  GbtParams p;
  p.n_estimators = 20;
  for (auto _ : state) benchmark::DoNotOptimize(gbt_fit(data, p, w, 1));
}
BENCHMARK(BM_GbtFit)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TabResNetStep(benchmark::State& state) {
  const auto batch = static_cast<Eigen::Index>(state.range(0));
  const Dataset data = make_data(static_cast<std::size_t>(batch));
  TabResNetConfig cfg;
  cfg.input_dim = static_cast<int>(data.n_features());
  cfg.n_classes = data.n_classes();
  cfg.hidden_dim = 16;
  TabResNet net(cfg);
  const ClassWeights w = weights_none(data.n_classes());
  for (auto _ : state) {
    net.zero_grad();
    const Matrix out = net.forward(data.features, Mode::Train);
    auto [loss, grad] = net.loss(out, data.labels, w);
    net.backward(grad);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TabResNetStep)->Arg(128)->Arg(1024);

void BM_TreePredict(benchmark::State& state) {
  const Dataset data = make_data(5000);
  const DecisionTree tree = dt_fit(data, TreeParams{}, weights_none(data.n_classes()));
  for (auto _ : state) benchmark::DoNotOptimize(tree.predict_proba(data.features));
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_TreePredict);

}  // namespace
