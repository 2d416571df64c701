#include "doceval/tokenizer.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "doceval/error.hpp"

namespace doceval {
namespace {

constexpr std::size_t kInserted = static_cast<std::size_t>(-1);

// One byte of the working string plus the byte range of the original text it
// stands for. Inserted padding has begin == kInserted.
struct Unit {
  char c;
  std::size_t begin;
  std::size_t end;
};

using Units = std::vector<Unit>;

Unit space() { return {' ', kInserted, kInserted}; }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_isolated_symbol(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x7B && u <= 0x7E) || (u >= 0x5B && u <= 0x60) || (u >= 0x20 && u <= 0x26) ||
         (u >= 0x28 && u <= 0x2B) || (u >= 0x3A && u <= 0x40) || u == 0x2F;
}

// Replaces every non-overlapping occurrence of `pattern`, scanning left to right.
Units replace_all(const Units& in, std::string_view pattern, std::string_view replacement) {
  Units out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    bool match = i + pattern.size() <= in.size();
    for (std::size_t k = 0; match && k < pattern.size(); ++k) match = in[i + k].c == pattern[k];
    if (!match) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t begin = in[i].begin;
    std::size_t end = in[i + pattern.size() - 1].end;
    for (char c : replacement) out.push_back({c, begin, end});
    i += pattern.size();
  }
  return out;
}

bool contains(const Units& units, std::string_view pattern) {
  for (std::size_t i = 0; i + pattern.size() <= units.size(); ++i) {
    std::size_t k = 0;
    while (k < pattern.size() && units[i + k].c == pattern[k]) ++k;
    if (k == pattern.size()) return true;
  }
  return false;
}

// Length in bytes of the whitespace code point starting at s[i], or 0.
// Matches the characters Python's str.split() treats as separators.
std::size_t whitespace_width(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 == ' ' || (b0 >= 0x09 && b0 <= 0x0D) || (b0 >= 0x1C && b0 <= 0x1F)) return 1;
  auto at = [&](std::size_t k) -> unsigned {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0u;
  };
  if (b0 == 0xC2 && (at(1) == 0x85 || at(1) == 0xA0)) return 2;
  if (b0 == 0xE1 && at(1) == 0x9A && at(2) == 0x80) return 3;
  if (b0 == 0xE2 && at(1) == 0x80) {
    unsigned b2 = at(2);
    if ((b2 >= 0x80 && b2 <= 0x8A) || b2 == 0xA8 || b2 == 0xA9 || b2 == 0xAF) return 3;
  }
  if (b0 == 0xE2 && at(1) == 0x81 && at(2) == 0x9F) return 3;
  if (b0 == 0xE3 && at(1) == 0x80 && at(2) == 0x80) return 3;
  return 0;
}

Units prepare(std::string_view text) {
  Units units;
  units.reserve(text.size() + 2);
  for (std::size_t i = 0; i < text.size(); ++i) units.push_back({text[i], i, i + 1});

  if (contains(units, "<skipped>")) units = replace_all(units, "<skipped>", "");
  if (contains(units, "-\n")) units = replace_all(units, "-\n", "");
  if (contains(units, "\n")) units = replace_all(units, "\n", " ");
  if (contains(units, "&")) {
    units = replace_all(units, "&quot;", "\"");
    units = replace_all(units, "&amp;", "&");
    units = replace_all(units, "&lt;", "<");
    units = replace_all(units, "&gt;", ">");
  }

  Units padded;
  padded.reserve(units.size() * 2 + 2);
  padded.push_back(space());

  // Isolate symbols and punctuation other than period, comma, dash and apostrophe.
  for (const Unit& u : units) {
    if (is_isolated_symbol(u.c)) {
      padded.push_back(space());
      padded.push_back(u);
      padded.push_back(space());
    } else {
      padded.push_back(u);
    }
  }
  padded.push_back(space());

  // Period and comma unless preceded by a digit.
  Units pass;
  pass.reserve(padded.size() * 2);
  for (std::size_t i = 0; i < padded.size();) {
    if (i + 1 < padded.size() && !is_digit(padded[i].c) &&
        (padded[i + 1].c == '.' || padded[i + 1].c == ',')) {
      pass.push_back(padded[i]);
      pass.push_back(space());
      pass.push_back(padded[i + 1]);
      pass.push_back(space());
      i += 2;
    } else {
      pass.push_back(padded[i++]);
    }
  }

  // Period and comma unless followed by a digit.
  Units pass2;
  pass2.reserve(pass.size() * 2);
  for (std::size_t i = 0; i < pass.size();) {
    if (i + 1 < pass.size() && (pass[i].c == '.' || pass[i].c == ',') && !is_digit(pass[i + 1].c)) {
      pass2.push_back(space());
      pass2.push_back(pass[i]);
      pass2.push_back(space());
      pass2.push_back(pass[i + 1]);
      i += 2;
    } else {
      pass2.push_back(pass[i++]);
    }
  }

  // Dash preceded by a digit.
  Units pass3;
  pass3.reserve(pass2.size() * 2);
  for (std::size_t i = 0; i < pass2.size();) {
    if (i + 1 < pass2.size() && is_digit(pass2[i].c) && pass2[i + 1].c == '-') {
      pass3.push_back(pass2[i]);
      pass3.push_back(space());
      pass3.push_back(pass2[i + 1]);
      pass3.push_back(space());
      i += 2;
    } else {
      pass3.push_back(pass2[i++]);
    }
  }
  return pass3;
}

}  // namespace

std::vector<TokenSpan> tokenize_scoring_spans(std::string_view text) {
  const Units units = prepare(text);
  std::string flat;
  flat.reserve(units.size());
  for (const Unit& u : units) flat.push_back(u.c);

  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < flat.size()) {
    if (std::size_t w = whitespace_width(flat, i); w > 0) {
      i += w;
      continue;
    }
    std::size_t start = i;
    while (i < flat.size() && whitespace_width(flat, i) == 0) ++i;
    TokenSpan span;
    span.text = flat.substr(start, i - start);
    span.begin = kInserted;
    span.end = 0;
    for (std::size_t k = start; k < i; ++k) {
      if (units[k].begin == kInserted) continue;
      span.begin = std::min(span.begin, units[k].begin);
      span.end = std::max(span.end, units[k].end);
    }
    spans.push_back(std::move(span));
  }
  return spans;
}

TokenSequence tokenize_scoring(std::string_view text) {
  TokenSequence tokens;
  for (auto& span : tokenize_scoring_spans(text)) tokens.push_back(std::move(span.text));
  return tokens;
}

TokenSequence split_whitespace(std::string_view text) {
  TokenSequence tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::size_t w = whitespace_width(text, i); w > 0) {
      i += w;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && whitespace_width(text, i) == 0) ++i;
    tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

TokenSequence split_codepoints(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (b >= 0xF0 && b < 0xF8) {
      len = 4;
    } else if (b >= 0xE0) {
      len = b < 0xF0 ? 3 : 1;
    } else if (b >= 0xC0) {
      len = 2;
    }
    if (i + len > text.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

LengthScheme LengthScheme::external(std::unordered_map<std::string, std::size_t> counts) {
  LengthScheme scheme(LengthVariant::kExternal);
  scheme.counts_ = std::move(counts);
  return scheme;
}

LengthScheme LengthScheme::external_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open external count file '" + path + "'");
  std::unordered_map<std::string, std::size_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(path, line_no, "expected sentence_id<TAB>count");
    std::string_view count_text(line.data() + tab + 1, line.size() - tab - 1);
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      // A non-numeric first line is a header.
      if (line_no == 1) continue;
      throw FormatError(path, line_no, "count is not a non-negative integer");
    }
    counts[line.substr(0, tab)] = count;
  }
  LengthScheme scheme = external(std::move(counts));
  scheme.source_ = path;
  return scheme;
}

LengthScheme LengthScheme::parse(const std::string& spec) {
  if (spec == "13a" || spec == "scoring") return scoring_tokens();
  if (spec == "ws" || spec == "whitespace") return whitespace();
  constexpr std::string_view prefix = "external:";
  if (spec.rfind(prefix, 0) == 0) return external_from_file(spec.substr(prefix.size()));
  throw InvalidArgument("unknown length scheme '" + spec + "' (expected 13a, ws or external:FILE)");
}

std::string LengthScheme::name() const {
  switch (variant_) {
    case LengthVariant::kScoringTokens:
      return "13a";
    case LengthVariant::kWhitespace:
      return "ws";
    case LengthVariant::kExternal:
      return source_.empty() ? std::string("external") : "external:" + source_;
  }
  return "";
}

std::size_t sentence_length(std::string_view sentence_id, std::string_view text,
                            const LengthScheme& scheme) {
  switch (scheme.variant()) {
    case LengthVariant::kScoringTokens:
      return tokenize_scoring(text).size();
    case LengthVariant::kWhitespace:
      return split_whitespace(text).size();
    case LengthVariant::kExternal: {
      const auto& counts = scheme.external_counts();
      auto it = counts.find(std::string(sentence_id));
      if (it == counts.end()) throw MissingExternalCount(std::string(sentence_id));
      return it->second;
    }
  }
  return 0;
}

}  // namespace doceval
