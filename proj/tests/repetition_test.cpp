#include "doceval/repetition.hpp"

#include <gtest/gtest.h>

#include <random>

#include "doceval/error.hpp"
#include "test_support.hpp"

using namespace doceval;
using testing_support::random_tokens;

namespace {

// Compares every pair of start positions; returns the pair with the smallest
// second position, then the smallest first.
std::optional<std::pair<std::size_t, std::size_t>> brute_repeat(const TokenSequence& t, std::size_t n) {
  if (n == 0 || t.size() < n + 1) return std::nullopt;
  for (std::size_t j = 1; j + n <= t.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) same = t[i + k] == t[j + k];
      if (same) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

TokenSequence words(int count, const std::string& prefix) {
  TokenSequence out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

TEST(Repeat, Examples) {
  auto block = words(10, "w");
  auto doubled = block;
  doubled.insert(doubled.end(), block.begin(), block.end());
  EXPECT_TRUE(has_long_repeat(doubled, 10));
  EXPECT_EQ(find_long_repeat(doubled, 10), std::make_pair(std::size_t{0}, std::size_t{10}));

  EXPECT_FALSE(has_long_repeat(words(25, "u"), 10));

  const TokenSequence as(12, "a");
  EXPECT_EQ(find_long_repeat(as, 10), std::make_pair(std::size_t{0}, std::size_t{1}));
  EXPECT_FALSE(has_long_repeat(TokenSequence(10, "a"), 10));
}

TEST(Repeat, MatchesBruteForce) {
  std::mt19937_64 rng(500);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t T = rng() % 501;
    const int alphabet = 2 + static_cast<int>(rng() % 6);
    auto tokens = random_tokens(rng, T, alphabet);
    const std::size_t n = 1 + rng() % 12;
    EXPECT_EQ(find_long_repeat(tokens, n), brute_repeat(tokens, n)) << "trial " << trial;
  }
}

TEST(Repeat, MonotoneInLength) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tokens = random_tokens(rng, rng() % 300, 3);
    for (std::size_t n = 1; n < 20; ++n) {
      if (has_long_repeat(tokens, n + 1)) EXPECT_TRUE(has_long_repeat(tokens, n));
    }
  }
}

TEST(Repeat, ShortSequencesHaveNoRepeat) {
  EXPECT_FALSE(has_long_repeat(TokenSequence(5, "a"), 10));
  EXPECT_THROW(has_long_repeat({"a", "a"}, 0), InvalidArgument);
}

TEST(Repeat, DocumentsAreCheckedSeparately) {
  // Each half is repeat-free; only their concatenation contains a repeat.
  const auto a = words(10, "x");
  std::vector<RepetitionInput> docs{{"S", "256", "d1", join_tokens(a)}, {"S", "256", "d2", join_tokens(a)}};
  const auto reports = repetition_rate(docs, 10);
  EXPECT_DOUBLE_EQ(reports.at({"S", "256"}).rate, 0.0);
}

TEST(Rate, Examples) {
  const auto clean = join_tokens(words(30, "c"));
  auto looped = words(12, "l");
  auto copy = looped;
  looped.insert(looped.end(), copy.begin(), copy.end());
  std::vector<RepetitionInput> docs;
  for (int i = 0; i < 3; ++i) docs.push_back({"NLLB", "2048", "d" + std::to_string(i), clean});
  docs.push_back({"NLLB", "2048", "d3", join_tokens(looped)});
  docs.push_back({"NLLB", "256", "d0", clean});
  const auto reports = repetition_rate(docs, 10, RepeatUnit::kScoringTokens, 2);
  EXPECT_DOUBLE_EQ(reports.at({"NLLB", "2048"}).rate, 0.25);
  EXPECT_DOUBLE_EQ(reports.at({"NLLB", "256"}).rate, 0.0);
  EXPECT_EQ(reports.at({"NLLB", "2048"}).per_document[3], std::make_pair(std::string("d3"), true));
}

TEST(Rate, EmptyInputRejected) {
  EXPECT_THROW(repetition_report({}, 10), EmptyGroup);
  EXPECT_THROW(repetition_rate({}, 10), EmptyGroup);
}

TEST(Units, CharacterMode) {
  EXPECT_EQ(repeat_units("ab c", RepeatUnit::kCharacters), (TokenSequence{"a", "b", " ", "c"}));
  EXPECT_EQ(parse_repeat_unit("char"), RepeatUnit::kCharacters);
  EXPECT_EQ(parse_repeat_unit("token"), RepeatUnit::kScoringTokens);
  EXPECT_THROW(parse_repeat_unit("word"), InvalidArgument);
}
