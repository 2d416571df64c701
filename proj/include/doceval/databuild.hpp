#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace doceval {

/// Default threshold under which the last fragment of a test document is
/// merged into the preceding pseudo-document.
inline constexpr std::size_t kTailMergeThreshold = 50;

/// Lower bound of the uniform budget draw for uniform-length corpora.
inline constexpr std::size_t kUniformBudgetMin = 128;

struct SentencePair {
  std::string src;
  std::string tgt;
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;
};

struct DocumentPair {
  std::string doc_id;
  std::vector<SentencePair> pairs;

  std::size_t src_length() const;
  std::size_t tgt_length() const;
};

/// A contiguous slice [start, end) of one document's sentence pairs.
struct PseudoDocument {
  std::string doc_id;
  std::size_t index = 0;  ///< position among the document's pseudo-documents
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;
  std::size_t budget = 0;    ///< the length target l'_i this slice was packed to
  bool overflow = false;     ///< a single pair longer than l_max
  bool tail_merged = false;  ///< absorbed a short final fragment

  std::size_t size() const { return end - start; }
};

struct GaussianParams {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Sample mean and (n-1) standard deviation of full-document lengths.
/// Throws InsufficientData for fewer than two lengths and
/// InsufficientVariance when all lengths are equal.
GaussianParams fit_length_distribution(std::span<const std::size_t> doc_lengths);

/// Greedy packing of one document: each slice takes consecutive pairs while
/// the running source length stays within the current budget; a pair longer
/// than the budget forms a slice alone. next_budget is called once per slice.
std::vector<PseudoDocument> pack_document(const DocumentPair& doc, std::size_t l_max,
                                          const std::function<std::size_t()>& next_budget);

/// Parameters actually used for Gaussian budget draws: the fitted moments
/// scaled by l_max / longest document, truncated to [min_budget, l_max).
struct GaussianBudget {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t min_budget = 1;
  std::size_t l_max = 0;
};

GaussianBudget scale_gaussian_budget(const std::vector<DocumentPair>& docs, std::size_t l_max,
                                     const GaussianParams& params);

/// Training corpus with Gaussian-like budgets (TED-G style).
std::vector<PseudoDocument> build_gaussian_corpus(const std::vector<DocumentPair>& docs,
                                                  std::size_t l_max, const GaussianParams& params,
                                                  std::uint64_t seed, unsigned jobs = 1);

/// Training corpus with budgets drawn uniformly from [128, l_max] (TED-U style).
std::vector<PseudoDocument> build_uniform_corpus(const std::vector<DocumentPair>& docs,
                                                 std::size_t l_max, std::uint64_t seed,
                                                 unsigned jobs = 1);

/// Test set with every slice packed as close to l_max as possible; a final
/// fragment shorter than tail_threshold joins the previous slice.
std::vector<PseudoDocument> build_fixed_length_testset(const std::vector<DocumentPair>& docs,
                                                       std::size_t l_max,
                                                       std::size_t tail_threshold = kTailMergeThreshold);

struct LengthStats {
  std::size_t count = 0;
  double mean = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
};

struct CorpusStats {
  LengthStats src;
  LengthStats tgt;
};

/// Count/mean/min/max of pseudo-document lengths on each side. Throws EmptyCorpus.
CorpusStats corpus_stats(std::span<const PseudoDocument> corpus);

/// Same statistics treating each full document as one unit.
CorpusStats document_stats(std::span<const DocumentPair> docs);

}  // namespace doceval
