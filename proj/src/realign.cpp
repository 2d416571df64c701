#include "doceval/realign.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <unordered_map>

#include "doceval/error.hpp"

namespace doceval {
namespace {

using Ids = std::vector<std::uint32_t>;

class Interner {
 public:
  Ids operator()(const TokenSequence& tokens) {
    Ids ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, inserted] = vocab_.try_emplace(t, static_cast<std::uint32_t>(vocab_.size()));
      ids.push_back(it->second);
    }
    return ids;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> vocab_;
};

std::size_t edit_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t k = 0; k <= b.size(); ++k) row[k] = k;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t k = 1; k <= b.size(); ++k) {
      std::size_t up = row[k];
      row[k] = std::min({up + 1, row[k - 1] + 1, diag + (a[i - 1] == b[k - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::size_t word_edit_distance(const TokenSequence& a, const TokenSequence& b) {
  Interner intern;
  const Ids x = intern(a);
  const Ids y = intern(b);
  return edit_distance(x, y);
}

// The minimal summed edit distance over all segmentations equals the edit
// distance between the hypothesis and the concatenated references: any
// alignment path can be cut where it crosses a reference boundary. The
// backward table restricted to boundary columns then lets us pick each cut
// greedily as the earliest one that still admits an optimal completion.
MwerAlignment mwer_segment(const TokenSequence& hyp, const std::vector<TokenSequence>& refs) {
  if (refs.empty()) throw InvalidArgument("mwer_segment needs at least one reference segment");

  Interner intern;
  const Ids h = intern(hyp);
  Ids r;
  std::vector<std::size_t> bounds{0};  // reference boundary columns b_0..b_S
  for (const auto& ref : refs) {
    Ids ids = intern(ref);
    r.insert(r.end(), ids.begin(), ids.end());
    bounds.push_back(r.size());
  }
  const std::size_t T = h.size();
  const std::size_t R = r.size();
  const std::size_t S = refs.size();

  // suffix[j][t] = edit distance of h[t..T) against r[bounds[j]..R).
  std::vector<std::vector<std::size_t>> suffix(S + 1, std::vector<std::size_t>(T + 1));
  std::vector<std::size_t> col(T + 1);
  std::vector<std::size_t> next(T + 1);
  for (std::size_t t = 0; t <= T; ++t) col[t] = T - t;
  std::size_t j = S;
  suffix[S] = col;
  while (j > 0 && bounds[j - 1] == R) suffix[--j] = col;
  for (std::size_t k = R; k-- > 0;) {
    next.swap(col);
    col[T] = R - k;
    for (std::size_t t = T; t-- > 0;) {
      col[t] = std::min({next[t] + 1, col[t + 1] + 1, next[t + 1] + (h[t] == r[k] ? 0 : 1)});
    }
    while (j > 0 && bounds[j - 1] == k) suffix[--j] = col;
  }

  const std::size_t optimum = suffix[0][0];

  MwerAlignment out;
  out.segmentation.cut_points.assign(1, 0);
  std::size_t start = 0;
  std::size_t spent = 0;
  std::vector<std::size_t> seg(T + 1);
  for (std::size_t s = 0; s < S; ++s) {
    const std::size_t b0 = bounds[s];
    const std::size_t b1 = bounds[s + 1];
    // seg[t] = edit distance of h[start..t) against r[b0..b1), for t >= start.
    std::vector<std::size_t> row(b1 - b0 + 1);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = k;
    seg[start] = row.back();
    for (std::size_t t = start; t < T; ++t) {
      std::size_t diag = row[0];
      row[0] = t + 1 - start;
      for (std::size_t k = 1; k < row.size(); ++k) {
        std::size_t up = row[k];
        row[k] = std::min({up + 1, row[k - 1] + 1, diag + (h[t] == r[b0 + k - 1] ? 0 : 1)});
        diag = up;
      }
      seg[t + 1] = row.back();
    }

    std::size_t cut = T;
    if (s + 1 < S) {
      cut = std::numeric_limits<std::size_t>::max();
      for (std::size_t t = start; t <= T; ++t) {
        if (spent + seg[t] + suffix[s + 1][t] == optimum) {
          cut = t;
          break;
        }
      }
      if (cut == std::numeric_limits<std::size_t>::max()) throw Error("mwer_segment: inconsistent tables");
    }

    AlignedPair pair;
    pair.hyp.assign(hyp.begin() + static_cast<std::ptrdiff_t>(start),
                    hyp.begin() + static_cast<std::ptrdiff_t>(cut));
    pair.ref = refs[s];
    pair.cost = seg[cut];
    spent += pair.cost;
    if (pair.hyp.empty()) ++out.result.empty_count;
    out.result.pairs.push_back(std::move(pair));
    out.segmentation.cut_points.push_back(cut);
    start = cut;
  }
  out.result.total_cost = spent;
  return out;
}

RealignedDocument realign_document(const std::string& doc_id, const std::string& hyp_text,
                                   const std::vector<std::string>& ref_sentences) {
  const auto spans = tokenize_scoring_spans(hyp_text);
  TokenSequence hyp;
  hyp.reserve(spans.size());
  for (const auto& s : spans) hyp.push_back(s.text);
  std::vector<TokenSequence> refs;
  refs.reserve(ref_sentences.size());
  for (const auto& sentence : ref_sentences) refs.push_back(tokenize_scoring(sentence));

  RealignedDocument doc;
  doc.doc_id = doc_id;
  doc.alignment = mwer_segment(hyp, refs);
  const auto& cuts = doc.alignment.segmentation.cut_points;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (cuts[s] == cuts[s + 1]) {
      doc.hyp_text.emplace_back();
      continue;
    }
    const std::size_t begin = spans[cuts[s]].begin;
    const std::size_t end = spans[cuts[s + 1] - 1].end;
    doc.hyp_text.push_back(hyp_text.substr(begin, end - begin));
  }
  return doc;
}

ScoreAggregate attach_scores(const std::vector<RealignedDocument>& docs,
                             const SentenceScores& scores) {
  ScoreAggregate agg;
  double doc_sum = 0.0;
  for (const auto& doc : docs) {
    const auto& pairs = doc.alignment.result.pairs;
    if (pairs.empty()) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto it = scores.find({doc.doc_id, i});
      if (it == scores.end()) {
        throw MissingScore("no score for document '" + doc.doc_id + "' sentence " +
                           std::to_string(i));
      }
      sum += it->second;
      if (pairs[i].hyp.empty()) ++agg.empty_sentences;
    }
    agg.sentences += pairs.size();
    const double mean = sum / static_cast<double>(pairs.size());
    agg.per_document.emplace_back(doc.doc_id, mean);
    doc_sum += mean;
  }
  if (!agg.per_document.empty()) agg.corpus_mean = doc_sum / static_cast<double>(agg.per_document.size());
  return agg;
}

}  // namespace doceval
