#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "imbench/rank_stats.hpp"

using namespace imbench;
using doctest::Approx;

namespace {

// Two-sided exact p-value by enumerating all 2^n sign assignments.
double brute_force_wilcoxon(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  // midranks of |d| computed by direct counting
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  double w_plus = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) w_plus += rank[i];
  }
  const double w_obs = std::min(w_plus, total - w_plus);
  std::size_t extreme = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) s += rank[i];
    }
    if (std::min(s, total - s) <= w_obs + 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(std::size_t{1} << n);
}

BlockMatrix make_matrix(const std::vector<std::vector<double>>& rows) {
  BlockMatrix m;
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    m.blocks.push_back("b" + std::to_string(i));
  }
  for (std::size_t j = 0; j < rows[0].size(); ++j) m.treatments.push_back("t" + std::to_string(j));
  return m;
}

BlockMatrix random_matrix(int n, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(k)));
  for (auto& r : rows) {
    for (auto& v : r) v = std::round(u(rng) * 20.0) / 20.0;  // coarse grid so ties occur
  }
  return make_matrix(rows);
}

}  // namespace

TEST_CASE("midranks") {
  const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
  const auto r = midranks(v);
  CHECK(r == std::vector<double>{3.5, 1.0, 3.5, 2.0});
  const std::vector<double> same{5.0, 5.0, 5.0};
  CHECK(midranks(same) == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("exact Wilcoxon matches brute-force enumeration") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<int> val(-4, 4);
  int compared = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const int n = len(rng);
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = val(rng);
      b[static_cast<std::size_t>(i)] = val(rng);
    }
    if (a == b) continue;
    const auto r = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);
    CHECK(r.exact);
    CHECK(r.p_value == brute_force_wilcoxon(a, b));
    CHECK(r.w_plus + r.w_minus == Approx(r.n * (r.n + 1) / 2.0));
    ++compared;
  }
  CHECK(compared > 250);
}

TEST_CASE("Wilcoxon examples") {
  const std::vector<double> a{1.1, 2.2, 3.3, 4.4, 5.5};
  const std::vector<double> b{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto r = wilcoxon_signed_rank(a, b);
  CHECK(r.exact);
  CHECK(r.w == 0.0);
  CHECK(r.p_value == 0.0625);

  // differences +1, -1, +2, -2 balance out
  const std::vector<double> c{1, 0, 2, 0};
  const std::vector<double> z{0, 1, 0, 2};
  CHECK(wilcoxon_signed_rank(c, z).p_value == 1.0);

  // zero differences are dropped
  const std::vector<double> with_zero{1.1, 2.2, 3.3, 4.4, 5.5, 6.0};
  const std::vector<double> base_zero{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  CHECK(wilcoxon_signed_rank(with_zero, base_zero).n == 5);

  CHECK_THROWS_AS(wilcoxon_signed_rank(b, b), DegeneratePairing);
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("Wilcoxon auto switches to the normal approximation above the limit") {
  std::vector<double> a, b;
  for (int i = 0; i < 13; ++i) {
    a.push_back(i + 0.5 + 0.25 * (i % 3));
    b.push_back(i);
  }
  CHECK_FALSE(wilcoxon_signed_rank(a, b).exact);
  a.pop_back();
  b.pop_back();
  CHECK(wilcoxon_signed_rank(a, b).exact);
}

TEST_CASE("normal approximation tracks the exact p-value") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(20), b(20);
    const double shift = 0.1 * (rep % 8);
    for (std::size_t i = 0; i < 20; ++i) {
      a[i] = g(rng) + shift;
      b[i] = g(rng);
    }
    const double exact = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact).p_value;
    const double approx = wilcoxon_signed_rank(a, b, WilcoxonMethod::Normal).p_value;
    CHECK(std::abs(exact - approx) < 0.03);
  }
}

TEST_CASE("Friedman planted example") {
  // four blocks all ranking the treatments identically
  const auto m = make_matrix({{0.9, 0.8, 0.7}, {0.8, 0.7, 0.6}, {0.95, 0.5, 0.1}, {0.6, 0.5, 0.4}});
  const auto f = friedman(m);
  CHECK(f.df == 2);
  CHECK(f.statistic == Approx(8.0).epsilon(1e-12));
  CHECK(f.p_value == Approx(std::exp(-4.0)).epsilon(1e-10));
  CHECK(f.mean_ranks == std::vector<double>{1.0, 2.0, 3.0});
  const auto g = friedman(m, Direction::Minimize);
  CHECK(g.mean_ranks == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(g.statistic == Approx(8.0));
}

TEST_CASE("Friedman on ties and degrees of freedom") {
  const auto tied = make_matrix({{0.5, 0.5, 0.5}, {0.2, 0.2, 0.2}});
  const auto f = friedman(tied);
  CHECK(f.statistic == 0.0);
  CHECK(f.p_value == 1.0);

  std::mt19937_64 rng(3);
  CHECK(friedman(random_matrix(6, 20, rng)).df == 19);
}

TEST_CASE("chi-square upper tail") {
  CHECK(chi_square_sf(0.0, 3.0) == 1.0);
  CHECK(chi_square_sf(2.0, 2.0) == Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(chi_square_sf(3.841458820694124, 1.0) == Approx(0.05).epsilon(1e-9));
}

TEST_CASE("Friedman and ranks are invariant to monotone transforms") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const auto m = random_matrix(8, 5, rng);
    BlockMatrix t = m;
    t.values = (m.values.array() * 3.0).exp() + 7.0;
    const auto a = friedman(m);
    const auto b = friedman(t);
    CHECK(a.statistic == Approx(b.statistic).epsilon(1e-12));
    CHECK(a.mean_ranks == b.mean_ranks);
  }
}

TEST_CASE("block ranks sum to k(k+1)/2 in every block") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rep % 7;
    const auto m = random_matrix(10, k, rng);
    const Matrix r = block_ranks(m, rep % 2 ? Direction::Maximize : Direction::Minimize);
    for (Eigen::Index i = 0; i < r.rows(); ++i) CHECK(r.row(i).sum() == Approx(k * (k + 1) / 2.0));
    const auto f = friedman(m);
    double total = 0;
    for (double v : f.mean_ranks) total += v;
    CHECK(total == Approx(k * (k + 1) / 2.0));
  }
}

TEST_CASE("Holm adjustment") {
  const std::vector<double> p{0.01, 0.04, 0.03};
  const auto h = holm_adjust(p);
  CHECK(h[0] == Approx(0.03));
  CHECK(h[1] == Approx(0.06));
  CHECK(h[2] == Approx(0.06));
  const std::vector<double> big{0.5, 0.9};
  CHECK(holm_adjust(big) == std::vector<double>{1.0, 1.0});
  CHECK(holm_adjust(std::vector<double>{}).empty());

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> q(8);
    for (auto& v : q) v = u(rng) * u(rng);
    const auto adj = holm_adjust(q);
    std::vector<std::size_t> order(q.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return q[x] < q[y]; });
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(adj[i] >= q[i]);
      CHECK(adj[i] <= 1.0);
    }
    for (std::size_t i = 1; i < order.size(); ++i) CHECK(adj[order[i]] >= adj[order[i - 1]]);
  }
}

TEST_CASE("maximal cliques") {
  // path 0-1-2 plus isolated 3
  std::vector<std::vector<bool>> g(4, std::vector<bool>(4, false));
  auto link = [&](int a, int b) { g[a][b] = g[b][a] = true; };
  link(0, 1);
  link(1, 2);
  const auto c = maximal_cliques(g);
  const std::set<std::vector<int>> got(c.begin(), c.end());
  CHECK(got == std::set<std::vector<int>>{{0, 1}, {1, 2}, {3}});

  // random graphs: every clique is complete and maximal, and cliques are distinct
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 3 + rep % 6;
    std::vector<std::vector<bool>> h(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), false));
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) h[a][b] = h[b][a] = coin(rng);
    }
    const auto cl = maximal_cliques(h);
    CHECK(std::set<std::vector<int>>(cl.begin(), cl.end()).size() == cl.size());
    std::vector<bool> covered(static_cast<std::size_t>(k), false);
    for (const auto& q : cl) {
      CHECK(std::is_sorted(q.begin(), q.end()));
      for (int x : q) {
        covered[static_cast<std::size_t>(x)] = true;
        for (int y : q) {
          if (x != y) CHECK(h[x][y]);
        }
      }
      for (int v = 0; v < k; ++v) {
        if (std::find(q.begin(), q.end(), v) != q.end()) continue;
        bool extends = true;
        for (int x : q) extends = extends && h[v][x];
        CHECK_FALSE(extends);
      }
    }
    for (bool v : covered) CHECK(v);
  }
}

TEST_CASE("rank analysis: identical columns share a clique, a shifted column stands alone") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.3, 0.6);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 12; ++i) {
    const double v = u(rng);
    rows.push_back({v, v, v + 0.3});
  }
  const auto a = rank_analysis(make_matrix(rows), 0.05);
  CHECK(a.average_ranks == std::vector<double>{2.5, 2.5, 1.0});
  REQUIRE(a.pairs.size() == 3);
  CHECK(a.pairs[0].degenerate);
  CHECK(a.pairs[0].p_adjusted == 1.0);
  CHECK(a.different(0, 2));
  CHECK(a.different(1, 2));
  CHECK_FALSE(a.different(0, 1));
  const std::set<std::vector<int>> got(a.cliques.begin(), a.cliques.end());
  CHECK(got == std::set<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("critical-difference SVG is well-formed with one bar per multi-member clique") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 15; ++i) {
    const double base = 0.5 + g(rng);
    rows.push_back({base, base + g(rng), base + 0.4 + g(rng), base + 0.41 + g(rng), base - 0.4 + g(rng)});
  }
  auto m = make_matrix(rows);
  m.treatments[0] = "a<b&c";
  const auto a = rank_analysis(m);
  std::size_t multi = 0;
  for (const auto& c : a.cliques) multi += c.size() >= 2 ? 1 : 0;

  std::istringstream in(render_cd_svg(a));
  boost::property_tree::ptree tree;
  REQUIRE_NOTHROW(boost::property_tree::read_xml(in, tree));
  const auto& svg = tree.get_child("svg");
  std::size_t bars = 0, labels = 0;
  for (const auto& [name, node] : svg) {
    if (name != "g") continue;
    const auto id = node.get<std::string>("<xmlattr>.id", "");
    for (const auto& [child, _] : node) {
      if (id == "cliques" && child == "line") ++bars;
      if (id == "treatments" && child == "text") ++labels;
    }
  }
  CHECK(bars == multi);
  CHECK(labels == 5);
  CHECK(render_cd_svg(a).find("a&lt;b&amp;c") != std::string::npos);

  const std::string text = render_cd_text(a);
  for (const auto& t : m.treatments) CHECK(text.find(t) != std::string::npos);
}

TEST_CASE("block matrix validation") {
  BlockMatrix m = make_matrix({{0.1, 0.2}, {0.3, 0.4}});
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS(make_matrix({{0.1, 0.2}}).validate());
  m.treatments.pop_back();
  CHECK_THROWS(m.validate());
  BlockMatrix bad = make_matrix({{0.1, std::nan("")}, {0.3, 0.4}});
  CHECK_THROWS(bad.validate());
}
