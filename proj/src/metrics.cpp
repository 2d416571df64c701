#include "doceval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string_view>
#include <unordered_map>

#include "doceval/error.hpp"
#include "doceval/parallel.hpp"

namespace doceval {
namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// Keys are the concatenated 4-byte ids of the n-gram's tokens.
std::array<NgramCounts, kMaxNgramOrder> count_ngrams(const std::vector<std::uint32_t>& ids) {
  std::array<NgramCounts, kMaxNgramOrder> counts;
  for (std::size_t n = 1; n <= kMaxNgramOrder; ++n) {
    if (ids.size() < n) break;
    auto& table = counts[n - 1];
    for (std::size_t i = 0; i + n <= ids.size(); ++i) {
      std::string key(reinterpret_cast<const char*>(ids.data() + i), n * sizeof(std::uint32_t));
      ++table[key];
    }
  }
  return counts;
}

}  // namespace

NgramStats& NgramStats::operator+=(const NgramStats& other) {
  for (std::size_t n = 0; n < kMaxNgramOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

NgramStats segment_stats(const TokenSequence& hyp, const TokenSequence& ref) {
  std::unordered_map<std::string_view, std::uint32_t> vocab;
  auto intern = [&](const TokenSequence& tokens) {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, inserted] = vocab.try_emplace(t, static_cast<std::uint32_t>(vocab.size()));
      ids.push_back(it->second);
    }
    return ids;
  };
  const auto hyp_ids = intern(hyp);
  const auto ref_ids = intern(ref);
  const auto hyp_counts = count_ngrams(hyp_ids);
  const auto ref_counts = count_ngrams(ref_ids);

  NgramStats stats;
  stats.hyp_len = hyp.size();
  stats.ref_len = ref.size();
  for (std::size_t n = 1; n <= kMaxNgramOrder; ++n) {
    stats.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    const auto& refs = ref_counts[n - 1];
    for (const auto& [key, count] : hyp_counts[n - 1]) {
      auto it = refs.find(key);
      if (it != refs.end()) stats.matches[n - 1] += std::min(count, it->second);
    }
  }
  return stats;
}

double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len == 0) throw ZeroHypothesisLength();
  if (hyp_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

BleuScore score_from_stats(const NgramStats& stats, BleuConfig config) {
  BleuScore out;
  out.stats = stats;
  out.hyp_len = stats.hyp_len;
  out.ref_len = stats.ref_len;
  out.brevity_penalty = stats.hyp_len == 0 ? 0.0 : brevity_penalty(stats.hyp_len, stats.ref_len);

  bool any_match = false;
  for (auto m : stats.matches) any_match = any_match || m > 0;
  if (!any_match) return out;

  // Orders with no hypothesis n-grams end the loop; with effective order they
  // are also dropped from the geometric mean.
  double smooth = 1.0;
  std::size_t used = kMaxNgramOrder;
  for (std::size_t n = 0; n < kMaxNgramOrder; ++n) {
    if (stats.totals[n] == 0) break;
    if (config.effective_order) used = n + 1;
    const auto total = static_cast<double>(stats.totals[n]);
    if (stats.matches[n] == 0) {
      if (config.smoothing == Smoothing::kExponential) {
        smooth *= 2.0;
        out.precisions[n] = 1.0 / (smooth * total);
      }
    } else {
      out.precisions[n] = static_cast<double>(stats.matches[n]) / total;
    }
  }
  out.orders_used = used;

  double log_sum = 0.0;
  for (std::size_t n = 0; n < used; ++n) {
    if (out.precisions[n] <= 0.0) return out;
    log_sum += std::log(out.precisions[n]);
  }
  out.score = 100.0 * out.brevity_penalty * std::exp(log_sum / static_cast<double>(used));
  return out;
}

BleuScore corpus_bleu(std::span<const SegmentPair> pairs, BleuConfig config) {
  if (pairs.empty()) throw EmptyCorpus();
  NgramStats total;
  for (const auto& pair : pairs) total += segment_stats(pair.hyp, pair.ref);
  return score_from_stats(total, config);
}

TokenSequence document_tokens(const std::vector<std::string>& segments) {
  TokenSequence tokens;
  for (const auto& segment : segments) {
    auto part = tokenize_scoring(segment);
    tokens.insert(tokens.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return tokens;
}

BleuScore sentence_bleu(const ScoredCorpus& corpus) {
  if (corpus.documents.empty()) throw EmptyCorpus();
  std::vector<SegmentPair> pairs;
  for (const auto& doc : corpus.documents) {
    if (doc.hyp.size() != doc.ref.size()) {
      throw SegmentCountMismatch("document '" + doc.doc_id + "' has " +
                                 std::to_string(doc.hyp.size()) + " hypothesis and " +
                                 std::to_string(doc.ref.size()) +
                                 " reference segments; sentence BLEU needs aligned segments");
    }
    for (std::size_t i = 0; i < doc.hyp.size(); ++i) {
      pairs.push_back({tokenize_scoring(doc.hyp[i]), tokenize_scoring(doc.ref[i])});
    }
  }
  if (pairs.empty()) throw EmptyCorpus();
  return corpus_bleu(pairs, {Smoothing::kExponential, false});
}

BleuScore d_bleu(const ScoredCorpus& corpus) {
  if (corpus.documents.empty()) throw EmptyCorpus();
  std::vector<SegmentPair> pairs;
  pairs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    pairs.push_back({document_tokens(doc.hyp), document_tokens(doc.ref)});
  }
  return corpus_bleu(pairs, {Smoothing::kExponential, false});
}

DsBleuResult ds_bleu(const ScoredCorpus& corpus, unsigned jobs) {
  if (corpus.documents.empty()) throw EmptyCorpus();
  DsBleuResult result;
  result.per_document.resize(corpus.documents.size());
  parallel_for(corpus.documents.size(), jobs, [&](std::size_t i) {
    const auto& doc = corpus.documents[i];
    auto stats = segment_stats(document_tokens(doc.hyp), document_tokens(doc.ref));
    result.per_document[i] = score_from_stats(stats, {Smoothing::kExponential, true});
  });
  double sum = 0.0;
  for (const auto& s : result.per_document) sum += s.score;
  result.corpus_score = sum / static_cast<double>(result.per_document.size());
  return result;
}

std::string format_score_bp(const BleuScore& score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f (%.2f)", score.score, score.brevity_penalty);
  return buf;
}

}  // namespace doceval
