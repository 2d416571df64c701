#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doceval/tokenizer.hpp"

namespace doceval {

inline constexpr std::size_t kDefaultRepeatLength = 10;

/// Start positions (first < second) of two identical n-grams, the earliest
/// such pair by second position then first. Hash matches are confirmed token
/// by token, so there are no false positives.
std::optional<std::pair<std::size_t, std::size_t>> find_long_repeat(const TokenSequence& tokens,
                                                                    std::size_t n);

/// True iff some n-gram occurs at two distinct start positions. A repeated
/// m-gram with m > n contains a repeated n-gram, so this also answers ">= n".
bool has_long_repeat(const TokenSequence& tokens, std::size_t n = kDefaultRepeatLength);

enum class RepeatUnit { kScoringTokens, kCharacters };

RepeatUnit parse_repeat_unit(const std::string& name);

/// Splits one translation into detection units.
TokenSequence repeat_units(const std::string& text, RepeatUnit unit);

struct RepetitionReport {
  std::vector<std::pair<std::string, bool>> per_document;  ///< input order
  double rate = 0.0;
  std::size_t n_threshold = kDefaultRepeatLength;
};

/// (system, l_max) key for grouping.
using RepetitionGroup = std::pair<std::string, std::string>;

struct RepetitionInput {
  std::string system;
  std::string l_max;
  std::string doc_id;
  std::string text;
};

/// Rate of flagged documents per group. Throws EmptyGroup for a group with no documents.
std::map<RepetitionGroup, RepetitionReport> repetition_rate(
    const std::vector<RepetitionInput>& docs, std::size_t n = kDefaultRepeatLength,
    RepeatUnit unit = RepeatUnit::kScoringTokens, unsigned jobs = 1);

RepetitionReport repetition_report(const std::vector<std::pair<std::string, TokenSequence>>& docs,
                                   std::size_t n = kDefaultRepeatLength);

}  // namespace doceval
