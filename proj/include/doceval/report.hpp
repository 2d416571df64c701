#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doceval/databuild.hpp"
#include "doceval/repetition.hpp"
#include "doceval/stats.hpp"

namespace doceval::report {

/// Fixed-point formatting that never prints "-0.0".
std::string fixed(double value, int decimals);

/// Suffix appended to a cell whose p-value is in (0.01, 0.05].
inline constexpr const char* kWeakMarker = "*";

/// Difference cell: "-" when p > 0.05, otherwise the difference to one
/// decimal, followed by the weak-significance marker when 0.01 < p <= 0.05.
std::string difference_cell(const PairedTestResult& r);

/// Difference with its p-value, "3.3 (0.00)", or "-" when p > 0.05. The
/// printed p-value already shows the tier, so no marker is added. Cells flagged as disagreeing across metrics are wrapped in "**".
std::string difference_with_p_cell(const PairedTestResult& r, bool disagree = false);

/// Adjacent-window table: one row per ladder step ("sent-256"), one column per system.
std::string window_table(const std::vector<WindowComparison>& cells,
                         const std::vector<std::string>& ladder,
                         const std::vector<std::string>& systems);

/// System comparison table: one row per window, one column per "A vs B" pair.
std::string system_table(const std::vector<SystemComparison>& cells,
                         const std::vector<std::pair<std::string, std::string>>& pairs,
                         const std::vector<std::string>& windows);

/// Position-bias table: rows "p0-p1".."p5-p6", one column per system, then
/// a final row of mean positions per system.
std::string position_table(const std::vector<PositionBiasResult>& results);

/// Repetition grid: one row per system, one column per l_max, rates to two decimals.
std::string repetition_grid(const std::map<RepetitionGroup, RepetitionReport>& reports,
                            const std::vector<std::string>& systems,
                            const std::vector<std::string>& l_max_values);

struct EmptyAlignmentCell {
  std::string system;
  std::string window;
  std::size_t empties = 0;
};

/// Empty-alignment grid: one row per window, one column per system.
std::string empty_alignment_grid(const std::vector<EmptyAlignmentCell>& cells);

/// Corpus statistics: rows count/mean/min/max for each side, one column per split.
std::string stats_table(const std::vector<std::pair<std::string, CorpusStats>>& columns);

}  // namespace doceval::report
