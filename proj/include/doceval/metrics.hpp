#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "doceval/tokenizer.hpp"

namespace doceval {

inline constexpr std::size_t kMaxNgramOrder = 4;

enum class Smoothing { kNone, kExponential };

struct BleuConfig {
  Smoothing smoothing = Smoothing::kExponential;
  bool effective_order = false;
};

/// Sufficient statistics for BLEU; adding them micro-aggregates a corpus.
struct NgramStats {
  std::array<std::size_t, kMaxNgramOrder> matches{};
  std::array<std::size_t, kMaxNgramOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  NgramStats& operator+=(const NgramStats& other);
};

struct BleuScore {
  double score = 0.0;                                  ///< 0..100
  std::array<double, kMaxNgramOrder> precisions{};     ///< 0..1, smoothed where applicable
  double brevity_penalty = 0.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  std::size_t orders_used = kMaxNgramOrder;
  NgramStats stats;
};

struct SegmentPair {
  TokenSequence hyp;
  TokenSequence ref;
};

/// Clipped n-gram counts of one hypothesis against one reference.
NgramStats segment_stats(const TokenSequence& hyp, const TokenSequence& ref);

/// Turns aggregated statistics into a score, following sacreBLEU 2.x.
BleuScore score_from_stats(const NgramStats& stats, BleuConfig config);

/// Corpus BLEU with counts summed over all pairs. Throws EmptyCorpus.
BleuScore corpus_bleu(std::span<const SegmentPair> pairs, BleuConfig config);

/// exp(1 - ref/hyp) when the hypothesis is shorter, else 1. Throws ZeroHypothesisLength.
double brevity_penalty(std::size_t hyp_len, std::size_t ref_len);

enum class Granularity { kSentence, kDocument };

struct ScoredDocument {
  std::string doc_id;
  std::vector<std::string> hyp;
  std::vector<std::string> ref;
};

struct ScoredCorpus {
  std::vector<ScoredDocument> documents;
  Granularity granularity = Granularity::kSentence;
};

/// Standard sentence-aligned corpus BLEU (eff:no, smooth:exp). Requires the
/// same number of hypothesis and reference segments in every document.
BleuScore sentence_bleu(const ScoredCorpus& corpus);

/// Each document is one segment; counts are micro-aggregated corpus-wide.
BleuScore d_bleu(const ScoredCorpus& corpus);

struct DsBleuResult {
  double corpus_score = 0.0;
  std::vector<BleuScore> per_document;
};

/// Per-document BLEU (eff:yes, smooth:exp) macro-averaged with equal weights.
DsBleuResult ds_bleu(const ScoredCorpus& corpus, unsigned jobs = 1);

/// Tokens of a document's segments, concatenated in order.
TokenSequence document_tokens(const std::vector<std::string>& segments);

/// "45.1 (0.97)": score to one decimal, brevity penalty to two.
std::string format_score_bp(const BleuScore& score);

}  // namespace doceval
