#include "doceval/repetition.hpp"

#include <cstdint>
#include <unordered_map>

#include "doceval/error.hpp"
#include "doceval/parallel.hpp"

namespace doceval {

std::optional<std::pair<std::size_t, std::size_t>> find_long_repeat(const TokenSequence& tokens,
                                                                    std::size_t n) {
  if (n == 0) throw InvalidArgument("repeat length must be at least 1");
  if (tokens.size() < n + 1) return std::nullopt;

  std::unordered_map<std::string_view, std::uint64_t> vocab;
  std::vector<std::uint64_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto [it, inserted] = vocab.try_emplace(t, vocab.size() + 1);
    ids.push_back(it->second);
  }

  constexpr std::uint64_t kBase = 1000003ULL;
  std::uint64_t top = 1;  // kBase^(n-1), wrapping
  for (std::size_t k = 1; k < n; ++k) top *= kBase;
  std::uint64_t hash = 0;
  for (std::size_t k = 0; k < n; ++k) hash = hash * kBase + ids[k];

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  const std::size_t starts = ids.size() - n + 1;
  for (std::size_t i = 0; i < starts; ++i) {
    if (i > 0) hash = (hash - ids[i - 1] * top) * kBase + ids[i + n - 1];
    auto& bucket = seen[hash];
    for (std::size_t prev : bucket) {
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) same = ids[prev + k] == ids[i + k];
      if (same) return std::make_pair(prev, i);
    }
    bucket.push_back(i);
  }
  return std::nullopt;
}

bool has_long_repeat(const TokenSequence& tokens, std::size_t n) {
  return find_long_repeat(tokens, n).has_value();
}

RepeatUnit parse_repeat_unit(const std::string& name) {
  if (name == "token" || name == "tokens" || name == "13a") return RepeatUnit::kScoringTokens;
  if (name == "char" || name == "chars" || name == "character") return RepeatUnit::kCharacters;
  throw InvalidArgument("unknown repetition unit '" + name + "' (expected token or char)");
}

TokenSequence repeat_units(const std::string& text, RepeatUnit unit) {
  return unit == RepeatUnit::kCharacters ? split_codepoints(text) : tokenize_scoring(text);
}

RepetitionReport repetition_report(const std::vector<std::pair<std::string, TokenSequence>>& docs,
                                   std::size_t n) {
  if (docs.empty()) throw EmptyGroup("repetition rate of an empty group");
  RepetitionReport report;
  report.n_threshold = n;
  std::size_t flagged = 0;
  for (const auto& [id, tokens] : docs) {
    const bool hit = has_long_repeat(tokens, n);
    flagged += hit ? 1 : 0;
    report.per_document.emplace_back(id, hit);
  }
  report.rate = static_cast<double>(flagged) / static_cast<double>(docs.size());
  return report;
}

std::map<RepetitionGroup, RepetitionReport> repetition_rate(const std::vector<RepetitionInput>& docs,
                                                            std::size_t n, RepeatUnit unit,
                                                            unsigned jobs) {
  if (docs.empty()) throw EmptyGroup("no translations to check for repetition");
  std::vector<char> hits(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    hits[i] = has_long_repeat(repeat_units(docs[i].text, unit), n) ? 1 : 0;
  });

  std::map<RepetitionGroup, RepetitionReport> out;
  std::map<RepetitionGroup, std::size_t> flagged;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    RepetitionGroup key{docs[i].system, docs[i].l_max};
    auto& report = out[key];
    report.n_threshold = n;
    report.per_document.emplace_back(docs[i].doc_id, hits[i] != 0);
    flagged[key] += hits[i];
  }
  for (auto& [key, report] : out) {
    report.rate = static_cast<double>(flagged[key]) / static_cast<double>(report.per_document.size());
  }
  return out;
}

}  // namespace doceval
