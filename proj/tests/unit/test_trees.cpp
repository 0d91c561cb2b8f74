#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "imbench/forest.hpp"
#include "imbench/gbt.hpp"
#include "imbench/losses.hpp"
#include "imbench/model.hpp"
#include "imbench/tree.hpp"

using namespace imbench;
using doctest::Approx;

namespace {

Dataset make(const Matrix& x, const Labels& y, int k) {
  Dataset d;
  d.features = x;
  d.labels = y;
  for (int c = 0; c < k; ++c) d.class_names.push_back("c" + std::to_string(c));
  for (Eigen::Index j = 0; j < x.cols(); ++j) d.feature_names.push_back("f" + std::to_string(j));
  return d;
}

// Four XOR corners, each repeated `copies` times.
Dataset xor_data(int copies = 10) {
  Matrix x(4 * copies, 2);
  Labels y;
  const double corners[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int i = 0; i < 4 * copies; ++i) {
    x(i, 0) = corners[i % 4][0];
    x(i, 1) = corners[i % 4][1];
    y.push_back((i % 4 == 1 || i % 4 == 2) ? 1 : 0);
  }
  return make(x, y, 2);
}

Dataset gaussian(std::size_t n, int k, int d, double sep, std::uint64_t seed, double gamma = 0.0) {
  SynthConfig cfg;
  cfg.n_samples = n;
  cfg.n_classes = k;
  cfg.n_features = d;
  cfg.cluster_separation = sep;
  cfg.power_law_exponent = gamma;
  cfg.seed = seed;
  return synth_generate(cfg);
}

double train_accuracy(const Classifier& m, const Dataset& d) {
  const Labels p = m.predict(d.features);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < p.size(); ++i) hit += p[i] == d.labels[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(p.size());
}

Matrix probe_grid(double lo, double hi, int side) {
  Matrix g(side * side, 2);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      g(i * side + j, 0) = lo + (hi - lo) * i / (side - 1);
      g(i * side + j, 1) = lo + (hi - lo) * j / (side - 1);
    }
  }
  return g;
}

void check_probability_rows(const Matrix& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CHECK(p.row(i).sum() == Approx(1.0).epsilon(1e-9));
    CHECK(p.row(i).minCoeff() >= 0.0);
  }
}

double weighted_train_cce(const GradientBoosting& m, const Dataset& d, const ClassWeights& w) {
  return weighted_cce(d.labels, m.predict_proba(d.features), w).loss;
}

}  // namespace

TEST_CASE("single-class training data gives one certain leaf") {
  const Matrix x = Matrix::Random(20, 3);
  const DecisionTree t = dt_fit(make(x, Labels(20, 1), 2), TreeParams{}, weights_none(2));
  CHECK(t.tree().nodes.size() == 1);
  const Matrix p = t.predict_proba(Matrix::Random(5, 3));
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(p(i, 1) == 1.0);
    CHECK(p(i, 0) == 0.0);
  }
}

TEST_CASE("decision tree separates XOR") {
  for (int depth : {2, 3, 10}) {
    TreeParams p;
    p.max_depth = depth;
    const Dataset d = xor_data();
    CHECK(train_accuracy(dt_fit(d, p, weights_none(2)), d) == 1.0);
  }
  // exhaustive oracle: a depth-1 tree (one axis split) cannot exceed 3/4 on XOR
  TreeParams stump;
  stump.max_depth = 1;
  const Dataset d = xor_data();
  CHECK(train_accuracy(dt_fit(d, stump, weights_none(2)), d) <= 0.75);
}

TEST_CASE("integer class weight equals physical duplication") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const Dataset base = gaussian(300, 2, 2, 1.0, 100 + static_cast<std::uint64_t>(rep), 1.5);
    Dataset dup = base;
    IndexList rows;
    for (std::size_t i = 0; i < base.rows(); ++i) {
      rows.push_back(i);
      if (base.labels[i] == 1) rows.push_back(i);
    }
    dup = base.subset(rows);
    const ClassWeights w{{1.0, 2.0}, WeightingStrategy::None, 0.0};
    for (auto crit : {SplitCriterion::Gini, SplitCriterion::Entropy}) {
      TreeParams p;
      p.criterion = crit;
      const DecisionTree weighted = dt_fit(base, p, w);
      const DecisionTree duplicated = dt_fit(dup, p, weights_none(2));
      const Matrix grid = probe_grid(-4.0, 4.0, 10);
      CHECK(weighted.predict(grid) == duplicated.predict(grid));
      CHECK(weighted.predict_proba(grid) == duplicated.predict_proba(grid));
    }
  }
}

TEST_CASE("train accuracy is non-decreasing in max_depth") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Dataset d = gaussian(400, 4, 3, 1.5, seed, 1.0);
    double prev = 0.0;
    for (int depth = 1; depth <= 12; ++depth) {
      TreeParams p;
      p.max_depth = depth;
      const double acc = train_accuracy(dt_fit(d, p, weights_none(4)), d);
      CHECK(acc >= prev);
      prev = acc;
    }
  }
}

TEST_CASE("tree respects structural limits") {
  const Dataset d = gaussian(500, 3, 4, 1.0, 5);
  TreeParams p;
  p.max_depth = 4;
  p.min_samples_leaf = 7;
  const DecisionTree t = dt_fit(d, p, weights_none(3));
  CHECK(t.tree().depth() <= 4);
  // every leaf holds at least min_samples_leaf training rows
  std::vector<std::size_t> per_leaf(t.tree().nodes.size(), 0);
  for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
    const TreeNode& leaf = t.tree().leaf_for(d.features.row(i).data());
    ++per_leaf[static_cast<std::size_t>(&leaf - t.tree().nodes.data())];
  }
  for (std::size_t i = 0; i < per_leaf.size(); ++i) {
    if (t.tree().nodes[i].is_leaf()) CHECK(per_leaf[i] >= 7);
  }
}

TEST_CASE("equal-gain splits go to the lowest feature") {
  // both features carry the same perfect split
  Matrix x(6, 2);
  x << 0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5;
  const Labels y{0, 0, 0, 1, 1, 1};
  const DecisionTree t = dt_fit(make(x, y, 2), TreeParams{}, weights_none(2));
  CHECK(t.tree().nodes[0].feature == 0);
  CHECK(t.tree().nodes[0].threshold == 2.5);
}

TEST_CASE("class weights shift the decision boundary towards the majority") {
  const Dataset d = gaussian(2000, 2, 2, 1.0, 21, 2.0);
  TreeParams p;
  p.max_depth = 3;
  const auto none = dt_fit(d, p, weights_none(2)).predict(d.features);
  const auto inv =
      dt_fit(d, p, weights_inverse(LabelDistribution::of(d.labels, 2))).predict(d.features);
  auto minority_calls = [](const Labels& l) { return std::count(l.begin(), l.end(), 1); };
  CHECK(minority_calls(inv) > minority_calls(none));
}

TEST_CASE("degenerate forest equals a decision tree") {
  const Dataset d = gaussian(300, 3, 4, 1.0, 6, 1.0);
  ForestParams fp;
  fp.n_estimators = 1;
  fp.bootstrap = false;
  fp.max_features = MaxFeatures{MaxFeatures::Rule::Fraction, 1.0};
  fp.max_depth = 25;
  TreeParams tp;
  tp.max_depth = 25;
  const ClassWeights w = weights_inverse(LabelDistribution::of(d.labels, 3));
  const Matrix probe = Matrix::Random(200, 4) * 3.0;
  CHECK(rf_fit(d, fp, w, 5).predict_proba(probe) == dt_fit(d, tp, w).predict_proba(probe));
}

TEST_CASE("forest is deterministic given the seed") {
  const Dataset d = gaussian(300, 3, 4, 1.0, 7);
  ForestParams fp;
  fp.n_estimators = 15;
  const Matrix probe = Matrix::Random(100, 4) * 3.0;
  const Matrix a = rf_fit(d, fp, weights_none(3), 42).predict_proba(probe);
  CHECK(a == rf_fit(d, fp, weights_none(3), 42).predict_proba(probe));
  CHECK(a != rf_fit(d, fp, weights_none(3), 43).predict_proba(probe));
  check_probability_rows(a);
}

TEST_CASE("forest is accurate on separated Gaussians") {
  const Dataset d = gaussian(2000, 2, 2, 6.0, 8);
  const SplitIndices s = stratified_split(d, SplitFractions{0.6, 0.2, 0.2}, 1);
  const Dataset train = d.subset(s.train);
  const Dataset test = d.subset(s.test);
  const RandomForest rf = rf_fit(train, ForestParams{}, weights_none(2), 3);
  CHECK(rf.trees().size() == 100);
  CHECK(train_accuracy(rf, test) >= 0.95);
}

TEST_CASE("max_features rules") {
  CHECK(MaxFeatures{}.resolve(16) == 4);
  CHECK(MaxFeatures{MaxFeatures::Rule::Log2, 1.0}.resolve(16) == 4);
  CHECK(MaxFeatures{MaxFeatures::Rule::Fraction, 0.5}.resolve(10) == 5);
  CHECK(MaxFeatures{MaxFeatures::Rule::Fraction, 0.01}.resolve(10) == 1);
  CHECK(MaxFeatures{}.resolve(1) == 1);
  CHECK(MaxFeatures::parse("log2").rule == MaxFeatures::Rule::Log2);
  CHECK(MaxFeatures::parse("0.25").fraction == 0.25);
  CHECK_THROWS(MaxFeatures::parse("half"));
}

TEST_CASE("zero boosting rounds predict the training prior") {
  const Dataset d = gaussian(400, 3, 2, 2.0, 9, 1.0);
  GbtParams p;
  p.n_estimators = 0;
  const GradientBoosting m = gbt_fit(d, p, weights_none(3), 0);
  const auto f = LabelDistribution::of(d.labels, 3).frequencies();
  const Matrix proba = m.predict_proba(Matrix::Random(7, 2));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    for (int k = 0; k < 3; ++k) CHECK(proba(i, k) == Approx(f[static_cast<std::size_t>(k)]).epsilon(1e-12));
  }
}

TEST_CASE("one boosting round lowers the weighted training loss") {
  const Dataset d = gaussian(500, 3, 2, 4.0, 10);
  GbtParams p;
  p.n_estimators = 1;
  p.learning_rate = 0.3;
  const ClassWeights w = weights_none(3);
  const GradientBoosting m = gbt_fit(d, p, w, 0);
  REQUIRE(m.train_loss().size() == 2);
  CHECK(m.train_loss()[1] < m.train_loss()[0]);
  GbtParams p0 = p;
  p0.n_estimators = 0;
  CHECK(weighted_train_cce(m, d, w) < weighted_train_cce(gbt_fit(d, p0, w, 0), d, w));
}

TEST_CASE("boosting separates XOR") {
  GbtParams p;
  p.n_estimators = 50;
  p.learning_rate = 0.3;
  p.max_depth = 3;
  const Dataset d = xor_data();
  CHECK(train_accuracy(gbt_fit(d, p, weights_none(2), 0), d) == 1.0);
}

TEST_CASE("full-batch boosting loss is non-increasing per round") {
  const Dataset sets[] = {gaussian(300, 2, 2, 1.0, 31), gaussian(400, 4, 3, 1.5, 32, 1.0),
                          gaussian(500, 6, 5, 2.0, 33, 0.5)};
  for (const auto& d : sets) {
    GbtParams p;
    p.n_estimators = 20;
    p.max_depth = 3;
    const ClassWeights w = weights_inverse(LabelDistribution::of(d.labels, d.n_classes()));
    const GradientBoosting m = gbt_fit(d, p, w, 1);
    const auto& loss = m.train_loss();
    REQUIRE(loss.size() == 21);
    for (std::size_t r = 1; r < loss.size(); ++r) CHECK(loss[r] <= loss[r - 1] + 1e-12);
    CHECK(loss.back() == Approx(weighted_train_cce(m, d, w)).epsilon(1e-9));
  }
}

TEST_CASE("boosting with row and column subsampling is seeded") {
  const Dataset d = gaussian(400, 3, 4, 1.5, 34);
  GbtParams p;
  p.n_estimators = 10;
  p.subsample = 0.7;
  p.colsample = 0.5;
  const Matrix probe = Matrix::Random(50, 4);
  const Matrix a = gbt_fit(d, p, weights_none(3), 5).predict_proba(probe);
  CHECK(a == gbt_fit(d, p, weights_none(3), 5).predict_proba(probe));
  CHECK(a != gbt_fit(d, p, weights_none(3), 6).predict_proba(probe));
  check_probability_rows(a);
}

TEST_CASE("L1 regularisation shrinks leaf values towards zero") {
  const Dataset d = gaussian(300, 2, 2, 1.0, 35);
  GbtParams p;
  p.n_estimators = 1;
  p.max_depth = 2;
  GbtParams strong = p;
  strong.reg_alpha = 1e6;
  const GradientBoosting m = gbt_fit(d, strong, weights_none(2), 0);
  GbtParams none = p;
  none.n_estimators = 0;
  CHECK(m.predict_margin(d.features) == gbt_fit(d, none, weights_none(2), 0).predict_margin(d.features));
}

TEST_CASE("all families are deterministic and produce valid rows") {
  const Dataset d = gaussian(300, 3, 3, 1.5, 40, 1.0);
  const Matrix probe = Matrix::Random(60, 3) * 2.0;
  const ClassWeights w = weights_median(LabelDistribution::of(d.labels, 3));
  check_probability_rows(dt_fit(d, TreeParams{}, w).predict_proba(probe));
  CHECK(dt_fit(d, TreeParams{}, w).predict_proba(probe) == dt_fit(d, TreeParams{}, w).predict_proba(probe));
  GbtParams gp;
  gp.n_estimators = 15;
  check_probability_rows(gbt_fit(d, gp, w, 2).predict_proba(probe));
}

TEST_CASE("tree models survive a JSON round-trip") {
  const Dataset d = gaussian(300, 3, 3, 1.5, 41);
  const Matrix probe = Matrix::Random(40, 3) * 2.0;
  const ClassWeights w = weights_none(3);
  ForestParams fp;
  fp.n_estimators = 5;
  GbtParams gp;
  gp.n_estimators = 5;
  const HyperParams params[] = {TreeParams{}, fp, gp};
  for (const auto& hp : params) {
    const TrainedModel m = fit_classifier(hp, d, nullptr, w, 3);
    const auto back = load_model_json(m.to_json());
    CHECK(back->family() == m.family);
    CHECK((back->predict_proba(probe) - m.predict_proba(probe)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("invalid parameters are rejected") {
  TreeParams t;
  t.max_depth = 0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t.max_depth = 33;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  GbtParams g;
  g.learning_rate = 0.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = GbtParams{};
  g.subsample = 1.5;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  ForestParams f;
  f.n_estimators = 0;
  CHECK_THROWS_AS(f.validate(), InvalidArgument);
  Dataset empty;
  empty.class_names = {"a", "b"};
  empty.features.resize(0, 2);
  empty.feature_names = {"x", "y"};
  CHECK_THROWS(dt_fit(empty, TreeParams{}, weights_none(2)));
}

TEST_CASE("hyperparameter JSON round-trip and unknown keys") {
  for (auto f : kAllFamilies) {
    const HyperParams p = default_hyperparams(f);
    const HyperParams back = hyperparams_from_json(hyperparams_to_json(p), default_hyperparams(f));
    CHECK(hyperparams_to_json(back) == hyperparams_to_json(p));
  }
  CHECK_THROWS_AS(hyperparams_from_json({{"max_depht", 3}}, TreeParams{}), InvalidArgument);
  const HyperParams rf = hyperparams_from_json({{"max_features", 0.5}, {"n_estimators", 7}}, ForestParams{});
  CHECK(std::get<ForestParams>(rf).max_features.fraction == 0.5);
  CHECK(std::get<ForestParams>(rf).n_estimators == 7);
}
