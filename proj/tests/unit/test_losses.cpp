#include <doctest.h>

#include <cmath>
#include <random>

#include "imbench/losses.hpp"

using namespace imbench;
using doctest::Approx;

namespace {

ClassWeights weights(std::vector<double> w) { return {std::move(w), WeightingStrategy::None, 0.0}; }

Matrix random_matrix(int n, int k, std::mt19937_64& rng, double scale = 2.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, k);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

Labels random_labels(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  Labels y(static_cast<std::size_t>(n));
  for (auto& v : y) v = pick(rng);
  return y;
}

double rel_error(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

}  // namespace

TEST_CASE("softmax examples") {
  const Matrix p = softmax(Matrix::Zero(1, 3));
  for (int k = 0; k < 3; ++k) CHECK(p(0, k) == Approx(1.0 / 3.0).epsilon(1e-15));

  Matrix a(1, 2), b(1, 2);
  a << 0.25, -1.5;
  b << 1000.25, 998.5;
  CHECK(softmax(a) == softmax(b));

  Matrix big(1, 2);
  big << 100.0, 0.0;
  const Matrix q = softmax(big);
  CHECK(std::isfinite(q(0, 0)));
  CHECK(q(0, 0) == Approx(1.0).epsilon(1e-15));
  // exp(-100) = 3.720075976020836e-44
  CHECK(q(0, 1) == Approx(3.720075976020836e-44).epsilon(1e-12));
}

TEST_CASE("softmax rows sum to one and keep the argmax") {
  std::mt19937_64 rng(1);
  const Matrix z = random_matrix(50, 6, rng, 30.0);
  const Matrix p = softmax(z);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    CHECK(p.row(i).sum() == Approx(1.0).epsilon(1e-12));
    Eigen::Index az, ap;
    z.row(i).maxCoeff(&az);
    p.row(i).maxCoeff(&ap);
    CHECK(az == ap);
  }
}

TEST_CASE("sigmoid is stable for large inputs") {
  Vector z(4);
  z << -800.0, -30.0, 0.0, 800.0;
  const Vector s = sigmoid(z);
  CHECK(s(0) >= 0.0);
  CHECK(s(0) < 1e-300);
  CHECK(s(1) == Approx(std::exp(-30.0) / (1 + std::exp(-30.0))).epsilon(1e-12));
  CHECK(s(2) == 0.5);
  CHECK(s(3) == 1.0);
}

TEST_CASE("weighted BCE examples") {
  Vector p1(1);
  p1 << 0.5;
  CHECK(weighted_bce(std::vector<int>{1}, p1, weights({1, 1})).loss == Approx(std::log(2.0)).epsilon(1e-12));

  Vector exact(2);
  exact << 1.0, 0.0;
  const double floor_bound = -std::log(1.0 - kProbEpsilon);
  CHECK(weighted_bce(std::vector<int>{1, 0}, exact, weights({1, 1})).loss <= floor_bound + 1e-15);

  Vector p(2);
  p << 0.9, 0.2;
  CHECK(std::abs(weighted_bce(std::vector<int>{1, 0}, p, weights({1, 2})).loss - 0.21693) < 1e-5);

  CHECK_THROWS_AS(weighted_bce(std::vector<int>{1}, p, weights({1, 1})), InvalidArgument);
}

TEST_CASE("weighted CCE examples") {
  const Matrix uniform = Matrix::Constant(3, 4, 0.25);
  CHECK(weighted_cce(std::vector<int>{0, 2, 3}, uniform, weights({1, 1, 1, 1})).loss ==
        Approx(std::log(4.0)).epsilon(1e-12));

  Matrix onehot = Matrix::Zero(2, 3);
  onehot(0, 1) = 1.0;
  onehot(1, 2) = 1.0;
  CHECK(weighted_cce(std::vector<int>{1, 2}, onehot, weights({1, 1, 1})).loss < 1e-11);

  Matrix p(2, 2);
  p << 0.5, 0.5, 0.75, 0.25;
  CHECK(std::abs(weighted_cce(std::vector<int>{0, 1}, p, weights({2, 0.5})).loss - 1.03972) < 1e-5);

  CHECK_THROWS_AS(weighted_cce(std::vector<int>{0}, p, weights({1, 1})), InvalidArgument);
}

TEST_CASE("index and one-hot labels give the same CCE") {
  std::mt19937_64 rng(2);
  const Matrix p = softmax(random_matrix(7, 4, rng));
  const Labels y = random_labels(7, 4, rng);
  const auto w = weights({0.5, 2.0, 1.0, 3.0});
  const auto a = weighted_cce(y, p, w);
  const auto b = weighted_cce(one_hot(y, 4), p, w);
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
}

TEST_CASE("CCE gradient matches central differences") {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + rep % 8;
    const int k = 2 + rep % 4;
    Matrix z = random_matrix(n, k, rng);
    const Labels y = random_labels(n, k, rng);
    std::vector<double> wv(static_cast<std::size_t>(k));
    std::uniform_real_distribution<double> wd(0.1, 4.0);
    for (auto& v : wv) v = wd(rng);
    const auto w = weights(wv);
    const Matrix g = weighted_cce(y, softmax(z), w).grad;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double orig = z.data()[i];
      z.data()[i] = orig + h;
      const double up = weighted_cce(y, softmax(z), w).loss;
      z.data()[i] = orig - h;
      const double down = weighted_cce(y, softmax(z), w).loss;
      z.data()[i] = orig;
      worst = std::max(worst, rel_error(g.data()[i], (up - down) / (2 * h)));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("BCE gradient matches central differences") {
  std::mt19937_64 rng(4);
  const double h = 1e-5;
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + rep % 8;
    Matrix zm = random_matrix(n, 1, rng);
    Vector z = zm.col(0);
    const Labels y = random_labels(n, 2, rng);
    const auto w = weights({0.3 + rep * 0.1, 2.0});
    const Vector g = weighted_bce(y, sigmoid(z), w).grad;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double orig = z(i);
      z(i) = orig + h;
      const double up = weighted_bce(y, sigmoid(z), w).loss;
      z(i) = orig - h;
      const double down = weighted_bce(y, sigmoid(z), w).loss;
      z(i) = orig;
      worst = std::max(worst, rel_error(g(i), (up - down) / (2 * h)));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("unit weights give the plain cross-entropy") {
  std::mt19937_64 rng(5);
  const Matrix p = softmax(random_matrix(9, 3, rng));
  const Labels y = random_labels(9, 3, rng);
  double plain = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) plain -= std::log(p(static_cast<Eigen::Index>(i), y[i]));
  plain /= 9.0;
  CHECK(weighted_cce(y, p, weights_none(3)).loss == Approx(plain).epsilon(1e-14));
}

TEST_CASE("scaling weights scales loss and gradient") {
  std::mt19937_64 rng(6);
  const Matrix p = softmax(random_matrix(6, 3, rng));
  const Labels y = random_labels(6, 3, rng);
  const auto a = weighted_cce(y, p, weights({1.0, 0.5, 2.0}));
  const auto b = weighted_cce(y, p, weights({3.0, 1.5, 6.0}));
  CHECK(b.loss == Approx(3.0 * a.loss).epsilon(1e-14));
  CHECK((b.grad - 3.0 * a.grad).cwiseAbs().maxCoeff() < 1e-15);

  Vector pb(3);
  pb << 0.2, 0.7, 0.9;
  const Labels yb{0, 1, 1};
  const auto c = weighted_bce(yb, pb, weights({1.0, 2.0}));
  const auto d = weighted_bce(yb, pb, weights({3.0, 6.0}));
  CHECK(d.loss == Approx(3.0 * c.loss).epsilon(1e-14));
  CHECK((d.grad - 3.0 * c.grad).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("losses are non-negative on open-interval probabilities") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix p = softmax(random_matrix(5, 4, rng, 5.0));
    CHECK(weighted_cce(random_labels(5, 4, rng), p, weights_none(4)).loss >= 0.0);
    const Vector pb = sigmoid(random_matrix(5, 1, rng, 5.0).col(0));
    CHECK(weighted_bce(random_labels(5, 2, rng), pb, weights_none(2)).loss >= 0.0);
  }
}
