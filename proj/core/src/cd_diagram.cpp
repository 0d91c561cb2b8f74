#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "csv_util.hpp"
#include "imbench/rank_stats.hpp"

namespace imbench {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// cliques drawn as bars, ordered by their leftmost average rank
std::vector<std::vector<int>> bars_of(const RankAnalysis& a) {
  std::vector<std::vector<int>> bars;
  for (const auto& c : a.cliques) {
    if (c.size() >= 2) bars.push_back(c);
  }
  auto lo = [&](const std::vector<int>& c) {
    double m = a.average_ranks[static_cast<std::size_t>(c.front())];
    for (int t : c) m = std::min(m, a.average_ranks[static_cast<std::size_t>(t)]);
    return m;
  };
  std::stable_sort(bars.begin(), bars.end(),
                   [&](const auto& x, const auto& y) { return lo(x) < lo(y); });
  return bars;
}

std::vector<int> rank_order(const RankAnalysis& a) {
  std::vector<int> order(a.treatments.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return a.average_ranks[static_cast<std::size_t>(x)] < a.average_ranks[static_cast<std::size_t>(y)];
  });
  return order;
}

std::pair<double, double> span_of(const RankAnalysis& a, const std::vector<int>& clique) {
  double lo = 1e300, hi = -1e300;
  for (int t : clique) {
    lo = std::min(lo, a.average_ranks[static_cast<std::size_t>(t)]);
    hi = std::max(hi, a.average_ranks[static_cast<std::size_t>(t)]);
  }
  return {lo, hi};
}

}  // namespace

std::string render_cd_svg(const RankAnalysis& a) {
  const int k = static_cast<int>(a.treatments.size());
  const auto order = rank_order(a);
  const auto bars = bars_of(a);

  const double width = 900.0;
  const double margin = 60.0;
  const double axis_y = 60.0;
  const double label_gap = 22.0;
  const int left_count = (k + 1) / 2;
  const int right_count = k - left_count;
  const double bar_top = axis_y + 20.0;
  const double bars_h = 10.0 * static_cast<double>(bars.size());
  const double labels_top = bar_top + bars_h + 20.0;
  const double height = labels_top + label_gap * std::max(left_count, right_count) + 30.0;
  const double span = std::max(1, k - 1);
  auto x_of = [&](double rank) { return margin + (rank - 1.0) / span * (width - 2.0 * margin); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <g id=\"axis\" stroke=\"black\">\n"
      << "    <line x1=\"" << x_of(1) << "\" y1=\"" << axis_y << "\" x2=\"" << x_of(std::max(k, 2))
      << "\" y2=\"" << axis_y << "\"/>\n";
  for (int r = 1; r <= std::max(k, 2); ++r) {
    svg << "    <line x1=\"" << x_of(r) << "\" y1=\"" << axis_y - 6 << "\" x2=\"" << x_of(r) << "\" y2=\""
        << axis_y << "\"/>\n"
        << "    <text x=\"" << x_of(r) << "\" y=\"" << axis_y - 10
        << "\" text-anchor=\"middle\" stroke=\"none\">" << r << "</text>\n";
  }
  svg << "  </g>\n  <g id=\"treatments\">\n";
  for (int pos = 0; pos < k; ++pos) {
    const int t = order[static_cast<std::size_t>(pos)];
    const double rank = a.average_ranks[static_cast<std::size_t>(t)];
    const bool left = pos < left_count;
    const int row = left ? pos : k - 1 - pos;
    const double y = labels_top + label_gap * row;
    const double x = x_of(rank);
    const double end_x = left ? margin - 10.0 : width - margin + 10.0;
    svg << "    <polyline fill=\"none\" stroke=\"black\" points=\"" << x << ',' << axis_y << ' ' << x << ','
        << y << ' ' << end_x << ',' << y << "\"/>\n"
        << "    <text x=\"" << (left ? end_x - 4 : end_x + 4) << "\" y=\"" << y + 4 << "\" text-anchor=\""
        << (left ? "end" : "start") << "\">" << xml_escape(a.treatments[static_cast<std::size_t>(t)])
        << " (" << fmt(rank) << ")</text>\n";
  }
  svg << "  </g>\n  <g id=\"cliques\" stroke=\"black\" stroke-width=\"4\">\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto [lo, hi] = span_of(a, bars[i]);
    const double y = bar_top + 10.0 * static_cast<double>(i);
    svg << "    <line x1=\"" << x_of(lo) - 3 << "\" y1=\"" << y << "\" x2=\"" << x_of(hi) + 3 << "\" y2=\"" << y
        << "\"/>\n";
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

std::string render_cd_text(const RankAnalysis& a) {
  std::ostringstream out;
  out << "average ranks (" << a.n_blocks << " blocks, alpha " << a.alpha << ", 1 = best)\n";
  const auto order = rank_order(a);
  std::size_t name_w = 0;
  for (const auto& n : a.treatments) name_w = std::max(name_w, n.size());
  for (int t : order) {
    const auto& name = a.treatments[static_cast<std::size_t>(t)];
    out << "  " << name << std::string(name_w - name.size() + 2, ' ')
        << fmt(a.average_ranks[static_cast<std::size_t>(t)], 3) << '\n';
  }
  out << "friedman chi2 = " << fmt(a.friedman.statistic, 4) << ", df = " << a.friedman.df
      << ", p = " << detail::format_double(a.friedman.p_value) << '\n';
  const auto bars = bars_of(a);
  out << "not significantly different (" << bars.size() << " bars)\n";
  for (const auto& c : bars) {
    const auto [lo, hi] = span_of(a, c);
    out << "  [" << fmt(lo) << ", " << fmt(hi) << "]";
    std::vector<int> members = c;
    std::stable_sort(members.begin(), members.end(), [&](int x, int y) {
      return a.average_ranks[static_cast<std::size_t>(x)] < a.average_ranks[static_cast<std::size_t>(y)];
    });
    for (int t : members) out << ' ' << a.treatments[static_cast<std::size_t>(t)];
    out << '\n';
  }
  return out.str();
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_cd_svg(const RankAnalysis& analysis, const std::filesystem::path& path) {
  write_text_file(path, render_cd_svg(analysis));
}

void write_cd_text(const RankAnalysis& analysis, const std::filesystem::path& path) {
  write_text_file(path, render_cd_text(analysis));
}

}  // namespace imbench
