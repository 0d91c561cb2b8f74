#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "imbench/types.hpp"

namespace imbench {

/// Which end of a value scale is better. Maximize: larger values get the
/// better (smaller) rank.
enum class Direction { Maximize, Minimize };

Direction parse_direction(std::string_view name);

/// Ascending midranks: the smallest value gets rank 1, tied values share the
/// mean of the ranks they span.
std::vector<double> midranks(std::span<const double> values);

/// n blocks (rows) by k treatments (columns).
struct BlockMatrix {
  Matrix values;
  std::vector<std::string> treatments;
  std::vector<std::string> blocks;

  int n_blocks() const { return static_cast<int>(values.rows()); }
  int n_treatments() const { return static_cast<int>(values.cols()); }
  void validate() const;
};

/// Within-block ranks, 1 = best under `direction`.
Matrix block_ranks(const BlockMatrix& m, Direction direction);

struct FriedmanResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<double> mean_ranks;
};

/// Friedman chi-square with the tie correction on its denominator. A matrix
/// tied in every block gives statistic 0 and p = 1.
FriedmanResult friedman(const BlockMatrix& m, Direction direction = Direction::Maximize);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

enum class WilcoxonMethod { Auto, Exact, Normal };

/// Auto uses the exact null distribution up to this many non-zero pairs.
inline constexpr std::size_t kWilcoxonExactMax = 12;

struct WilcoxonResult {
  double w = 0.0;        // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n = 0;     // pairs left after dropping zero differences
  double p_value = 1.0;  // two-sided
  bool exact = false;
};

/// Every paired difference is zero.
class DegeneratePairing : public DataError {
 public:
  DegeneratePairing() : DataError("degenerate pairing: all differences are zero") {}
};

/// Zero differences are dropped and |d| is midranked. The exact p-value is
/// the share of the 2^n sign assignments whose statistic is at most the
/// observed one; the normal approximation uses the tie-corrected variance and
/// a continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

/// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

struct PairwiseTest {
  int a = 0;
  int b = 0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool degenerate = false;
};

struct RankAnalysis {
  std::vector<std::string> treatments;
  std::vector<double> average_ranks;
  std::vector<PairwiseTest> pairs;  // a < b, lexicographic order
  std::vector<std::vector<int>> cliques;  // maximal, members ascending
  double alpha = 0.05;
  Direction direction = Direction::Maximize;
  FriedmanResult friedman;
  int n_blocks = 0;

  double adjusted_p(int a, int b) const;
  bool different(int a, int b) const { return adjusted_p(a, b) < alpha; }
};

/// Average ranks, all pairwise Wilcoxon tests in one Holm family, and the
/// maximal cliques of the "not significantly different" relation.
RankAnalysis rank_analysis(const BlockMatrix& m, double alpha = 0.05,
                           Direction direction = Direction::Maximize,
                           WilcoxonMethod method = WilcoxonMethod::Auto);

/// Maximal cliques of an undirected graph given as an adjacency matrix.
std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<bool>>& adjacent);

/// Critical-difference diagram as a standalone SVG document.
std::string render_cd_svg(const RankAnalysis& analysis);
/// Plain-text version: ranks in order, then one line per bar.
std::string render_cd_text(const RankAnalysis& analysis);
void write_cd_svg(const RankAnalysis& analysis, const std::filesystem::path& path);
void write_cd_text(const RankAnalysis& analysis, const std::filesystem::path& path);

}  // namespace imbench
