#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doceval/tokenizer.hpp"

namespace doceval {

/// Levenshtein distance over tokens (unit cost insert/delete/substitute).
std::size_t word_edit_distance(const TokenSequence& a, const TokenSequence& b);

/// Cut points 0 = t_0 <= t_1 <= ... <= t_S = T over hypothesis token indices.
/// Segment j covers [t_j, t_{j+1}); segments may be empty.
struct Segmentation {
  std::vector<std::size_t> cut_points;

  std::size_t segment_count() const { return cut_points.empty() ? 0 : cut_points.size() - 1; }
};

struct AlignedPair {
  TokenSequence hyp;
  TokenSequence ref;
  std::size_t cost = 0;
};

struct AlignmentResult {
  std::vector<AlignedPair> pairs;
  std::size_t total_cost = 0;
  std::size_t empty_count = 0;
};

struct MwerAlignment {
  Segmentation segmentation;
  AlignmentResult result;
};

/// Re-segments a hypothesis so the summed word edit distance against the
/// reference segments is minimal. Ties resolve to the lexicographically
/// smallest cut-point tuple. Throws InvalidArgument when refs is empty.
MwerAlignment mwer_segment(const TokenSequence& hyp, const std::vector<TokenSequence>& refs);

/// Realignment of one document, with each segment mapped back to the
/// original hypothesis text.
struct RealignedDocument {
  std::string doc_id;
  std::vector<std::string> hyp_text;  ///< one entry per reference sentence
  MwerAlignment alignment;
};

RealignedDocument realign_document(const std::string& doc_id, const std::string& hyp_text,
                                   const std::vector<std::string>& ref_sentences);

/// Per-sentence external scores keyed by (doc_id, ref_index).
using SentenceScores = std::map<std::pair<std::string, std::size_t>, double>;

struct ScoreAggregate {
  std::vector<std::pair<std::string, double>> per_document;  ///< input order
  double corpus_mean = 0.0;  ///< unweighted mean of the document means
  std::size_t sentences = 0;
  std::size_t empty_sentences = 0;
};

/// Macro-averages external per-sentence scores over realigned documents.
/// Empty hypothesis segments keep their supplied score. Throws MissingScore.
ScoreAggregate attach_scores(const std::vector<RealignedDocument>& docs,
                             const SentenceScores& scores);

}  // namespace doceval
