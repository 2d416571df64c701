#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace doceval {

/// Ordered list of non-empty tokens.
using TokenSequence = std::vector<std::string>;

/// A scoring token together with the byte range of the original text it came from.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits text with the mteval-v13a rules used by sacreBLEU's "13a" tokenizer.
/// Case is preserved and no Unicode normalization is applied.
TokenSequence tokenize_scoring(std::string_view text);

/// Same tokens as tokenize_scoring, each carrying its source byte range.
/// Tokens produced from an HTML entity span the whole entity.
std::vector<TokenSpan> tokenize_scoring_spans(std::string_view text);

/// Splits on Unicode whitespace (the set Python's str.split() uses).
TokenSequence split_whitespace(std::string_view text);

/// Splits UTF-8 text into code points; invalid bytes become one-byte units.
TokenSequence split_codepoints(std::string_view text);

std::string join_tokens(const TokenSequence& tokens);

enum class LengthVariant { kScoringTokens, kWhitespace, kExternal };

/// How sentence lengths are counted when packing documents.
class LengthScheme {
 public:
  LengthScheme() = default;
  static LengthScheme scoring_tokens() { return LengthScheme(LengthVariant::kScoringTokens); }
  static LengthScheme whitespace() { return LengthScheme(LengthVariant::kWhitespace); }
  static LengthScheme external(std::unordered_map<std::string, std::size_t> counts);

  /// Reads a TSV of "sentence_id<TAB>count" lines.
  static LengthScheme external_from_file(const std::string& path);

  /// Parses "13a", "ws" or "external:FILE".
  static LengthScheme parse(const std::string& spec);

  LengthVariant variant() const { return variant_; }
  std::string name() const;
  const std::unordered_map<std::string, std::size_t>& external_counts() const { return counts_; }

 private:
  explicit LengthScheme(LengthVariant v) : variant_(v) {}

  LengthVariant variant_ = LengthVariant::kScoringTokens;
  std::unordered_map<std::string, std::size_t> counts_;
  std::string source_;
};

/// Token count of a sentence. External schemes look the count up by id and
/// throw MissingExternalCount when it is absent.
std::size_t sentence_length(std::string_view sentence_id, std::string_view text,
                            const LengthScheme& scheme);

}  // namespace doceval
