#include "doceval/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "doceval/error.hpp"

namespace doceval {
namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kEpsilon) break;
  }
  return h;
}

double parse_double(std::string_view text, bool& ok) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  ok = ec == std::errc() && ptr == text.data() + text.size();
  return value;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0 || std::isnan(x)) throw InvalidArgument("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double x = dof / (dof + t * t);
  return std::clamp(regularized_incomplete_beta(dof / 2.0, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided_p(t, dof);
  return t > 0.0 ? 1.0 - tail : tail;
}

SignificanceTier significance_tier(double p_value) {
  if (p_value <= 0.01) return SignificanceTier::kStrong;
  if (p_value <= 0.05) return SignificanceTier::kWeak;
  return SignificanceTier::kNone;
}

PairedTestResult paired_t_test(std::span<const double> diffs) {
  if (diffs.size() < 2) throw InsufficientSamples("paired t-test needs at least two differences");
  PairedTestResult r;
  r.n = diffs.size();
  const double n = static_cast<double>(diffs.size());
  double sum = 0.0;
  for (double d : diffs) sum += d;
  r.mean_diff = sum / n;
  double ss = 0.0;
  for (double d : diffs) ss += (d - r.mean_diff) * (d - r.mean_diff);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) {
    if (r.mean_diff == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), r.mean_diff);
      r.p_value = 0.0;
      r.degenerate = true;
    }
    return r;
  }
  r.t_stat = r.mean_diff / (sd / std::sqrt(n));
  r.p_value = student_t_two_sided_p(r.t_stat, n - 1.0);
  return r;
}

ConfigId ConfigId::parse(const std::string& id) {
  auto colon = id.rfind(':');
  if (colon == std::string::npos) return {id, ""};
  return {id.substr(0, colon), id.substr(colon + 1)};
}

ScoreTable ScoreTable::from_tsv(const std::string& path, std::string metric) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score table '" + path + "'");
  ScoreTable table(std::move(metric));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw FormatError(path, line_no, "expected config_id<TAB>unit_id<TAB>score");
    bool ok = false;
    double score = parse_double(std::string_view(line).substr(t2 + 1), ok);
    if (!ok) {
      if (line_no == 1) continue;
      throw FormatError(path, line_no, "score is not a number");
    }
    table.add(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), score);
  }
  return table;
}

void ScoreTable::add(const std::string& config_id, const std::string& unit_id, double score) {
  auto [it, inserted] = scores_.try_emplace(config_id);
  if (inserted) order_.push_back(config_id);
  if (!it->second.emplace(unit_id, score).second) {
    throw InvalidArgument("duplicate score for unit '" + unit_id + "' in '" + config_id + "'");
  }
}

const std::map<std::string, double>& ScoreTable::units(const std::string& config_id) const {
  auto it = scores_.find(config_id);
  if (it == scores_.end()) throw InvalidArgument("no scores for configuration '" + config_id + "'");
  return it->second;
}

std::vector<std::string> ScoreTable::systems() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& config : order_) {
    auto system = ConfigId::parse(config).system;
    if (seen.insert(system).second) out.push_back(system);
  }
  return out;
}

ScoreTable ScoreTable::restricted(std::span<const std::string> subset) const {
  std::set<std::string> keep(subset.begin(), subset.end());
  ScoreTable out(metric_);
  for (const auto& config : order_) {
    for (const auto& [unit, score] : scores_.at(config)) {
      if (keep.empty() || keep.count(unit)) out.add(config, unit, score);
    }
  }
  return out;
}

PairedTestResult compare_configs(const ScoreTable& table, const std::string& config_a,
                                 const std::string& config_b) {
  const auto& a = table.units(config_a);
  const auto& b = table.units(config_b);
  if (a.size() != b.size()) {
    throw UnitMismatch("configurations '" + config_a + "' and '" + config_b +
                       "' cover different units (" + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  std::vector<double> diffs;
  diffs.reserve(a.size());
  auto ib = b.begin();
  for (const auto& [unit, score] : a) {
    if (ib->first != unit) {
      throw UnitMismatch("unit '" + unit + "' of '" + config_a + "' is missing from '" + config_b + "'");
    }
    diffs.push_back(score - ib->second);
    ++ib;
  }
  return paired_t_test(diffs);
}

std::vector<WindowComparison> compare_adjacent_windows(const ScoreTable& table,
                                                       std::span<const std::string> ladder) {
  std::vector<WindowComparison> out;
  if (ladder.size() < 2) return out;
  for (const auto& system : table.systems()) {
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
      const std::string a = ConfigId{system, ladder[k]}.str();
      const std::string b = ConfigId{system, ladder[k + 1]}.str();
      out.push_back({system, ladder[k], ladder[k + 1], compare_configs(table, a, b)});
    }
  }
  return out;
}

std::vector<SystemComparison> compare_systems(
    const ScoreTable& table, std::span<const std::pair<std::string, std::string>> system_pairs,
    std::span<const std::string> windows, const ScoreTable* other_metric) {
  std::vector<SystemComparison> out;
  for (const auto& window : windows) {
    for (const auto& [sa, sb] : system_pairs) {
      const std::string a = ConfigId{sa, window}.str();
      const std::string b = ConfigId{sb, window}.str();
      SystemComparison cell{window, sa, sb, compare_configs(table, a, b), false};
      if (other_metric) {
        const auto other = compare_configs(*other_metric, a, b);
        cell.metrics_disagree = cell.result.significant() != other.significant();
      }
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::map<std::string, std::vector<PositionBucket>> group_position_rows(
    const std::vector<std::tuple<std::string, std::string, std::size_t, double>>& rows) {
  std::map<std::string, std::map<std::string, std::vector<PositionObservation>>> grouped;
  std::map<std::string, std::vector<std::string>> sentence_order;
  for (const auto& [system, sentence, position, score] : rows) {
    auto& obs = grouped[system][sentence];
    if (obs.empty()) sentence_order[system].push_back(sentence);
    obs.push_back({position, score});
  }
  std::map<std::string, std::vector<PositionBucket>> out;
  for (auto& [system, sentences] : grouped) {
    auto& buckets = out[system];
    for (const auto& sentence : sentence_order[system]) {
      auto& obs = sentences[sentence];
      if (obs.size() != kPositionCount) {
        throw IncompleteBucket("system '" + system + "' sentence '" + sentence + "' has " +
                               std::to_string(obs.size()) + " positions, expected " +
                               std::to_string(kPositionCount));
      }
      std::sort(obs.begin(), obs.end(),
                [](const auto& x, const auto& y) { return x.position < y.position; });
      PositionBucket bucket;
      bucket.sentence_id = sentence;
      std::copy(obs.begin(), obs.end(), bucket.observations.begin());
      buckets.push_back(std::move(bucket));
    }
  }
  return out;
}

PositionBiasResult position_bias_analysis(const std::string& system,
                                          std::span<const PositionBucket> buckets) {
  if (buckets.size() < 2) throw InsufficientSamples("position bias analysis needs at least two sentences");
  PositionBiasResult result;
  result.system = system;
  for (const auto& bucket : buckets) {
    for (std::size_t k = 0; k + 1 < kPositionCount; ++k) {
      if (bucket.observations[k].position >= bucket.observations[k + 1].position) {
        throw IncompleteBucket("positions of sentence '" + bucket.sentence_id +
                               "' are not strictly increasing");
      }
    }
    for (std::size_t k = 0; k < kPositionCount; ++k) {
      result.mean_positions[k] += static_cast<double>(bucket.observations[k].position);
    }
  }
  for (auto& m : result.mean_positions) m /= static_cast<double>(buckets.size());

  std::vector<double> diffs(buckets.size());
  for (std::size_t k = 0; k + 1 < kPositionCount; ++k) {
    for (std::size_t s = 0; s < buckets.size(); ++s) {
      diffs[s] = buckets[s].observations[k].score - buckets[s].observations[k + 1].score;
    }
    result.consecutive[k] = paired_t_test(diffs);
  }
  return result;
}

}  // namespace doceval
