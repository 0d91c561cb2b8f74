#include "imbench/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace imbench {

Direction parse_direction(std::string_view name) {
  if (name == "maximize" || name == "max") return Direction::Maximize;
  if (name == "minimize" || name == "min") return Direction::Minimize;
  throw InvalidArgument("direction must be maximize or minimize, got '" + std::string(name) + "'");
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
    i = j;
  }
  return ranks;
}

void BlockMatrix::validate() const {
  if (values.rows() < 2 || values.cols() < 2) {
    throw InvalidArgument("block matrix needs at least 2 blocks and 2 treatments");
  }
  if (!values.allFinite()) throw InvalidArgument("block matrix has missing or non-finite cells");
  if (!treatments.empty() && static_cast<Eigen::Index>(treatments.size()) != values.cols()) {
    throw InvalidArgument("treatment names do not match the column count");
  }
  if (!blocks.empty() && static_cast<Eigen::Index>(blocks.size()) != values.rows()) {
    throw InvalidArgument("block names do not match the row count");
  }
}

Matrix block_ranks(const BlockMatrix& m, Direction direction) {
  m.validate();
  Matrix ranks(m.values.rows(), m.values.cols());
  std::vector<double> row(static_cast<std::size_t>(m.values.cols()));
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      const double v = m.values(i, j);
      row[static_cast<std::size_t>(j)] = direction == Direction::Maximize ? -v : v;
    }
    const auto r = midranks(row);
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) ranks(i, j) = r[static_cast<std::size_t>(j)];
  }
  return ranks;
}

double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

FriedmanResult friedman(const BlockMatrix& m, Direction direction) {
  const Matrix ranks = block_ranks(m, direction);
  const double n = static_cast<double>(ranks.rows());
  const double k = static_cast<double>(ranks.cols());
  FriedmanResult r;
  r.df = static_cast<int>(ranks.cols()) - 1;
  r.mean_ranks.resize(static_cast<std::size_t>(ranks.cols()));
  double ss = 0.0;
  for (Eigen::Index j = 0; j < ranks.cols(); ++j) {
    const double mean = ranks.col(j).mean();
    r.mean_ranks[static_cast<std::size_t>(j)] = mean;
    ss += (mean - (k + 1.0) / 2.0) * (mean - (k + 1.0) / 2.0);
  }
  // tie correction: sum of t^3 - t over tie groups in every block
  double ties = 0.0;
  for (Eigen::Index i = 0; i < ranks.rows(); ++i) {
    std::vector<double> row(ranks.row(i).data(), ranks.row(i).data() + ranks.cols());
    std::sort(row.begin(), row.end());
    for (std::size_t a = 0; a < row.size();) {
      std::size_t b = a + 1;
      while (b < row.size() && row[b] == row[a]) ++b;
      const double t = static_cast<double>(b - a);
      ties += t * t * t - t;
      a = b;
    }
  }
  const double correction = 1.0 - ties / (n * k * (k * k - 1.0));
  if (correction <= 1e-12) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = 12.0 * n / (k * (k + 1.0)) * ss / correction;
  r.p_value = chi_square_sf(r.statistic, static_cast<double>(r.df));
  return r;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method) {
  if (a.size() != b.size()) throw InvalidArgument("wilcoxon: samples differ in length");
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diff.push_back(d);
  }
  if (diff.empty()) throw DegeneratePairing();

  std::vector<double> mags(diff.size());
  std::transform(diff.begin(), diff.end(), mags.begin(), [](double d) { return std::abs(d); });
  const auto ranks = midranks(mags);

  WilcoxonResult r;
  r.n = diff.size();
  for (std::size_t i = 0; i < diff.size(); ++i) (diff[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
  r.w = std::min(r.w_plus, r.w_minus);

  const bool exact = method == WilcoxonMethod::Exact ||
                     (method == WilcoxonMethod::Auto && r.n <= kWilcoxonExactMax);
  r.exact = exact;
  if (exact) {
    if (r.n > 62) throw InvalidArgument("exact Wilcoxon supports at most 62 pairs");
    // midranks are multiples of 1/2, so doubled ranks are integers
    std::vector<long> doubled(r.n);
    long total = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
      doubled[i] = std::lround(2.0 * ranks[i]);
      total += doubled[i];
    }
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
    ways[0] = 1;
    for (long v : doubled) {
      for (long s = total; s >= v; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - v)];
    }
    const long w_obs = std::lround(2.0 * r.w);
    std::uint64_t extreme = 0;
    for (long s = 0; s <= total; ++s) {
      if (std::min(s, total - s) <= w_obs) extreme += ways[static_cast<std::size_t>(s)];
    }
    r.p_value = static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(r.n));
    return r;
  }

  const double n = static_cast<double>(r.n);
  double ties = 0.0;
  {
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i + 1;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      ties += t * t * t - t;
      i = j;
    }
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p-values must lie in [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double scaled = std::min(1.0, static_cast<double>(m - j) * p_values[order[j]]);
    running = std::max(running, scaled);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

double RankAnalysis::adjusted_p(int a, int b) const {
  if (a == b) return 1.0;
  if (a > b) std::swap(a, b);
  for (const auto& p : pairs) {
    if (p.a == a && p.b == b) return p.p_adjusted;
  }
  throw InvalidArgument("no pairwise test for the requested treatments");
}

namespace {

void bron_kerbosch(const std::vector<std::vector<bool>>& adj, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    std::vector<int> clique = r;
    std::sort(clique.begin(), clique.end());
    out.push_back(std::move(clique));
    return;
  }
  // pivot: vertex of P u X with the most neighbours in P
  int pivot = -1;
  std::size_t best = 0;
  for (const auto* set : {&p, &x}) {
    for (int u : *set) {
      std::size_t c = 0;
      for (int v : p) c += adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ? 1 : 0;
      if (pivot < 0 || c > best) {
        pivot = u;
        best = c;
      }
    }
  }
  std::vector<int> candidates;
  for (int v : p) {
    if (!adj[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)]) candidates.push_back(v);
  }
  for (int v : candidates) {
    std::vector<int> np, nx;
    for (int u : p) {
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) np.push_back(u);
    }
    for (int u : x) {
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) nx.push_back(u);
    }
    r.push_back(v);
    bron_kerbosch(adj, r, std::move(np), std::move(nx), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<bool>>& adjacent) {
  std::vector<std::vector<int>> out;
  std::vector<int> r;
  std::vector<int> p(adjacent.size());
  std::iota(p.begin(), p.end(), 0);
  bron_kerbosch(adjacent, r, std::move(p), {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

RankAnalysis rank_analysis(const BlockMatrix& m, double alpha, Direction direction,
                           WilcoxonMethod method) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  m.validate();
  RankAnalysis out;
  out.alpha = alpha;
  out.direction = direction;
  out.n_blocks = m.n_blocks();
  out.treatments = m.treatments;
  const int k = m.n_treatments();
  if (out.treatments.empty()) {
    for (int j = 0; j < k; ++j) out.treatments.push_back("t" + std::to_string(j));
  }
  out.friedman = friedman(m, direction);
  out.average_ranks = out.friedman.mean_ranks;

  std::vector<double> raw;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      PairwiseTest t{a, b, 1.0, 1.0, false};
      const Vector ca = m.values.col(a);
      const Vector cb = m.values.col(b);
      try {
        t.p_raw = wilcoxon_signed_rank(std::span<const double>(ca.data(), static_cast<std::size_t>(ca.size())),
                                       std::span<const double>(cb.data(), static_cast<std::size_t>(cb.size())),
                                       method)
                      .p_value;
      } catch (const DegeneratePairing&) {
        t.degenerate = true;
        t.p_raw = 1.0;
      }
      out.pairs.push_back(t);
      raw.push_back(t.p_raw);
    }
  }
  const auto adjusted = holm_adjust(raw);
  for (std::size_t i = 0; i < adjusted.size(); ++i) out.pairs[i].p_adjusted = adjusted[i];

  std::vector<std::vector<bool>> same(static_cast<std::size_t>(k),
                                      std::vector<bool>(static_cast<std::size_t>(k), false));
  for (const auto& t : out.pairs) {
    const bool linked = t.p_adjusted >= alpha;
    same[static_cast<std::size_t>(t.a)][static_cast<std::size_t>(t.b)] = linked;
    same[static_cast<std::size_t>(t.b)][static_cast<std::size_t>(t.a)] = linked;
  }
  out.cliques = maximal_cliques(same);
  return out;
}

}  // namespace imbench
