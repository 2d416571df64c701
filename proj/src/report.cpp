#include "doceval/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "doceval/error.hpp"

namespace doceval::report {
namespace {

std::string column_order_key(const std::string& a, const std::string& b) { return a + " vs " + b; }

template <typename Row>
std::string join_row(const std::string& label, const Row& cells) {
  std::string line = label;
  for (const auto& cell : cells) {
    line.push_back('\t');
    line += cell;
  }
  line.push_back('\n');
  return line;
}

// Preserves first-seen order.
void remember(std::vector<std::string>& order, std::set<std::string>& seen, const std::string& v) {
  if (seen.insert(v).second) order.push_back(v);
}

}  // namespace

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string difference_cell(const PairedTestResult& r) {
  switch (r.tier()) {
    case SignificanceTier::kNone:
      return "-";
    case SignificanceTier::kWeak:
      return fixed(r.mean_diff, 1) + kWeakMarker;
    case SignificanceTier::kStrong:
      break;
  }
  return fixed(r.mean_diff, 1);
}

std::string difference_with_p_cell(const PairedTestResult& r, bool disagree) {
  if (r.tier() == SignificanceTier::kNone) return "-";
  std::string cell = fixed(r.mean_diff, 1) + " (" + fixed(r.p_value, 2) + ")";
  if (disagree) cell = "**" + cell + "**";
  return cell;
}

std::string window_table(const std::vector<WindowComparison>& cells,
                         const std::vector<std::string>& ladder,
                         const std::vector<std::string>& systems) {
  std::map<std::pair<std::string, std::string>, const WindowComparison*> index;
  for (const auto& c : cells) index[{c.system, c.shorter + "-" + c.longer}] = &c;

  std::string out = join_row("", systems);
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    const std::string row = ladder[k] + "-" + ladder[k + 1];
    std::vector<std::string> line;
    for (const auto& system : systems) {
      auto it = index.find({system, row});
      line.push_back(it == index.end() ? "" : difference_cell(it->second->result));
    }
    out += join_row(row, line);
  }
  return out;
}

std::string system_table(const std::vector<SystemComparison>& cells,
                         const std::vector<std::pair<std::string, std::string>>& pairs,
                         const std::vector<std::string>& windows) {
  std::map<std::pair<std::string, std::string>, const SystemComparison*> index;
  for (const auto& c : cells) index[{c.window, column_order_key(c.system_a, c.system_b)}] = &c;

  std::vector<std::string> header;
  for (const auto& [a, b] : pairs) header.push_back(column_order_key(a, b));
  std::string out = join_row("", header);
  for (const auto& window : windows) {
    std::vector<std::string> line;
    for (const auto& column : header) {
      auto it = index.find({window, column});
      line.push_back(it == index.end()
                         ? ""
                         : difference_with_p_cell(it->second->result, it->second->metrics_disagree));
    }
    out += join_row(window, line);
  }
  return out;
}

std::string position_table(const std::vector<PositionBiasResult>& results) {
  std::vector<std::string> header;
  for (const auto& r : results) header.push_back(r.system);
  std::string out = join_row("", header);
  for (std::size_t k = 0; k + 1 < kPositionCount; ++k) {
    std::vector<std::string> line;
    for (const auto& r : results) line.push_back(difference_cell(r.consecutive[k]));
    out += join_row("p" + std::to_string(k) + "-p" + std::to_string(k + 1), line);
  }
  std::vector<std::string> means;
  for (const auto& r : results) {
    std::string cell;
    for (std::size_t k = 0; k < kPositionCount; ++k) {
      if (k) cell += ",";
      cell += fixed(r.mean_positions[k], 0);
    }
    means.push_back(cell);
  }
  out += join_row("mean_positions", means);
  return out;
}

std::string repetition_grid(const std::map<RepetitionGroup, RepetitionReport>& reports,
                            const std::vector<std::string>& systems,
                            const std::vector<std::string>& l_max_values) {
  std::string out = join_row("", l_max_values);
  for (const auto& system : systems) {
    std::vector<std::string> line;
    for (const auto& l_max : l_max_values) {
      auto it = reports.find({system, l_max});
      line.push_back(it == reports.end() ? "" : fixed(it->second.rate, 2));
    }
    out += join_row(system, line);
  }
  return out;
}

std::string empty_alignment_grid(const std::vector<EmptyAlignmentCell>& cells) {
  std::vector<std::string> systems, windows;
  std::set<std::string> seen_systems, seen_windows;
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& c : cells) {
    remember(systems, seen_systems, c.system);
    remember(windows, seen_windows, c.window);
    counts[{c.window, c.system}] += c.empties;
  }
  std::string out = join_row("", systems);
  for (const auto& window : windows) {
    std::vector<std::string> line;
    for (const auto& system : systems) {
      auto it = counts.find({window, system});
      line.push_back(it == counts.end() ? "" : std::to_string(it->second));
    }
    out += join_row(window, line);
  }
  return out;
}

std::string stats_table(const std::vector<std::pair<std::string, CorpusStats>>& columns) {
  std::vector<std::string> header;
  for (const auto& [label, stats] : columns) header.push_back(label);
  std::string out = join_row("", header);
  auto side_rows = [&](const std::string& side, auto pick) {
    std::vector<std::string> count, mean, min, max;
    for (const auto& [label, stats] : columns) {
      const LengthStats& s = pick(stats);
      count.push_back(std::to_string(s.count));
      mean.push_back(fixed(s.mean, 0));
      min.push_back(std::to_string(s.min));
      max.push_back(std::to_string(s.max));
    }
    out += join_row(side + ".count", count);
    out += join_row(side + ".mean", mean);
    out += join_row(side + ".min", min);
    out += join_row(side + ".max", max);
  };
  side_rows("src", [](const CorpusStats& s) -> const LengthStats& { return s.src; });
  side_rows("tgt", [](const CorpusStats& s) -> const LengthStats& { return s.tgt; });
  return out;
}

}  // namespace doceval::report
