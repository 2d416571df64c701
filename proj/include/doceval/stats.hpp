#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace doceval {

/// I_x(a, b), the regularized incomplete beta function, by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Student's t cumulative distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

enum class SignificanceTier {
  kStrong,  ///< p <= 0.01
  kWeak,    ///< 0.01 < p <= 0.05
  kNone,    ///< p > 0.05
};

SignificanceTier significance_tier(double p_value);

struct PairedTestResult {
  double mean_diff = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool degenerate = false;  ///< zero variance with a non-zero mean

  SignificanceTier tier() const { return significance_tier(p_value); }
  bool significant() const { return tier() != SignificanceTier::kNone; }
};

/// Two-sided one-sample t-test on paired differences (n - 1 degrees of
/// freedom). Zero variance gives t = 0, p = 1 when the mean is zero, and
/// p = 0 flagged degenerate otherwise. Throws InsufficientSamples when n < 2.
PairedTestResult paired_t_test(std::span<const double> diffs);

/// "<system>:<window>" split at the last colon; a missing colon means an empty window.
struct ConfigId {
  std::string system;
  std::string window;

  static ConfigId parse(const std::string& id);
  std::string str() const { return window.empty() ? system : system + ":" + window; }
};

/// Scores keyed by configuration and evaluation unit (document or sentence).
class ScoreTable {
 public:
  explicit ScoreTable(std::string metric = "score") : metric_(std::move(metric)) {}

  /// Reads "config_id<TAB>unit_id<TAB>score" lines; a non-numeric first line is a header.
  static ScoreTable from_tsv(const std::string& path, std::string metric = "score");

  void add(const std::string& config_id, const std::string& unit_id, double score);

  const std::string& metric() const { return metric_; }
  bool has_config(const std::string& config_id) const { return scores_.count(config_id) > 0; }
  const std::map<std::string, double>& units(const std::string& config_id) const;

  /// Configurations in first-insertion order.
  const std::vector<std::string>& configs() const { return order_; }

  /// Systems in first-insertion order.
  std::vector<std::string> systems() const;

  /// Both configurations restricted to `subset` (all units when empty).
  ScoreTable restricted(std::span<const std::string> subset) const;

 private:
  std::string metric_;
  std::map<std::string, std::map<std::string, double>> scores_;
  std::vector<std::string> order_;
};

/// Paired test on score(a) - score(b). Throws UnitMismatch unless both
/// configurations cover exactly the same units.
PairedTestResult compare_configs(const ScoreTable& table, const std::string& config_a,
                                 const std::string& config_b);

struct WindowComparison {
  std::string system;
  std::string shorter;
  std::string longer;
  PairedTestResult result;  ///< positive when the shorter window scores higher
};

/// One test per adjacent window pair of the ladder, for every system in the table.
std::vector<WindowComparison> compare_adjacent_windows(const ScoreTable& table,
                                                       std::span<const std::string> ladder);

struct SystemComparison {
  std::string window;
  std::string system_a;
  std::string system_b;
  PairedTestResult result;       ///< positive when system_a scores higher
  bool metrics_disagree = false; ///< significance differs under the second metric
};

/// Tests system_a against system_b at every window. When `other_metric` is
/// given, each cell is also tested there and flagged if exactly one metric is
/// significant at p <= 0.05.
std::vector<SystemComparison> compare_systems(
    const ScoreTable& table, std::span<const std::pair<std::string, std::string>> system_pairs,
    std::span<const std::string> windows, const ScoreTable* other_metric = nullptr);

inline constexpr std::size_t kPositionCount = 7;

struct PositionObservation {
  std::size_t position = 0;
  double score = 0.0;
};

/// One sentence translated at seven increasing positions.
struct PositionBucket {
  std::string sentence_id;
  std::array<PositionObservation, kPositionCount> observations{};
};

struct PositionBiasResult {
  std::string system;
  std::array<double, kPositionCount> mean_positions{};
  std::array<PairedTestResult, kPositionCount - 1> consecutive{};  ///< p_k minus p_{k+1}
};

/// Groups "system, sentence_id, position, score" rows into buckets; throws
/// IncompleteBucket when a sentence does not have exactly seven positions.
std::map<std::string, std::vector<PositionBucket>> group_position_rows(
    const std::vector<std::tuple<std::string, std::string, std::size_t, double>>& rows);

/// Paired tests between consecutive positions. Throws IncompleteBucket when
/// positions are not strictly increasing within a sentence.
PositionBiasResult position_bias_analysis(const std::string& system,
                                          std::span<const PositionBucket> buckets);

}  // namespace doceval
