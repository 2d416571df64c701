#include "doceval/databuild.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doceval/error.hpp"
#include "doceval/parallel.hpp"
#include "doceval/rng.hpp"

namespace doceval {
namespace {

constexpr int kMaxRejections = 1000000;

std::vector<PseudoDocument> flatten(std::vector<std::vector<PseudoDocument>> per_doc) {
  std::vector<PseudoDocument> out;
  for (auto& slices : per_doc) {
    out.insert(out.end(), std::make_move_iterator(slices.begin()),
               std::make_move_iterator(slices.end()));
  }
  return out;
}

LengthStats summarize(const std::vector<std::size_t>& lengths) {
  LengthStats s;
  s.count = lengths.size();
  s.min = *std::min_element(lengths.begin(), lengths.end());
  s.max = *std::max_element(lengths.begin(), lengths.end());
  double sum = 0.0;
  for (auto l : lengths) sum += static_cast<double>(l);
  s.mean = sum / static_cast<double>(lengths.size());
  return s;
}

}  // namespace

std::size_t DocumentPair::src_length() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.src_len;
  return n;
}

std::size_t DocumentPair::tgt_length() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.tgt_len;
  return n;
}

GaussianParams fit_length_distribution(std::span<const std::size_t> doc_lengths) {
  if (doc_lengths.size() < 2) {
    throw InsufficientData("fitting a length distribution needs at least two documents");
  }
  double mean = 0.0;
  for (auto l : doc_lengths) mean += static_cast<double>(l);
  mean /= static_cast<double>(doc_lengths.size());
  double ss = 0.0;
  for (auto l : doc_lengths) ss += (static_cast<double>(l) - mean) * (static_cast<double>(l) - mean);
  const double stddev = std::sqrt(ss / static_cast<double>(doc_lengths.size() - 1));
  if (!(stddev > 0.0)) throw InsufficientVariance("all document lengths are equal");
  return {mean, stddev};
}

std::vector<PseudoDocument> pack_document(const DocumentPair& doc, std::size_t l_max,
                                          const std::function<std::size_t()>& next_budget) {
  std::vector<PseudoDocument> slices;
  std::size_t i = 0;
  while (i < doc.pairs.size()) {
    PseudoDocument slice;
    slice.doc_id = doc.doc_id;
    slice.index = slices.size();
    slice.start = i;
    slice.budget = next_budget();
    while (i < doc.pairs.size() && slice.src_len + doc.pairs[i].src_len <= slice.budget) {
      slice.src_len += doc.pairs[i].src_len;
      slice.tgt_len += doc.pairs[i].tgt_len;
      ++i;
    }
    if (i == slice.start) {
      slice.src_len = doc.pairs[i].src_len;
      slice.tgt_len = doc.pairs[i].tgt_len;
      ++i;
    }
    slice.end = i;
    slice.overflow = slice.src_len > l_max;
    slices.push_back(std::move(slice));
  }
  return slices;
}

GaussianBudget scale_gaussian_budget(const std::vector<DocumentPair>& docs, std::size_t l_max,
                                     const GaussianParams& params) {
  std::size_t longest = 0;
  std::size_t shortest_sentence = std::numeric_limits<std::size_t>::max();
  for (const auto& doc : docs) {
    longest = std::max(longest, doc.src_length());
    for (const auto& p : doc.pairs) {
      if (p.src_len > 0) shortest_sentence = std::min(shortest_sentence, p.src_len);
    }
  }
  if (longest == 0) throw EmptyCorpus("no source tokens in corpus");
  GaussianBudget budget;
  const double scale = static_cast<double>(l_max) / static_cast<double>(longest);
  budget.mean = params.mean * scale;
  budget.stddev = params.stddev * scale;
  budget.min_budget = shortest_sentence;
  budget.l_max = l_max;
  if (budget.min_budget >= l_max) {
    throw InvalidArgument("l_max must exceed the shortest sentence length (" +
                          std::to_string(budget.min_budget) + ")");
  }
  return budget;
}

std::vector<PseudoDocument> build_gaussian_corpus(const std::vector<DocumentPair>& docs,
                                                  std::size_t l_max, const GaussianParams& params,
                                                  std::uint64_t seed, unsigned jobs) {
  if (!(params.stddev > 0.0)) throw InsufficientVariance("Gaussian budget needs stddev > 0");
  const GaussianBudget budget = scale_gaussian_budget(docs, l_max, params);
  std::vector<std::vector<PseudoDocument>> per_doc(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t d) {
    Rng rng(derive_seed(seed, docs[d].doc_id));
    auto draw = [&]() -> std::size_t {
      for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double x = std::round(rng.normal(budget.mean, budget.stddev));
        if (x >= static_cast<double>(budget.min_budget) && x < static_cast<double>(budget.l_max)) {
          return static_cast<std::size_t>(x);
        }
      }
      throw Error("Gaussian budget rejection sampling did not converge");
    };
    per_doc[d] = pack_document(docs[d], l_max, draw);
  });
  return flatten(std::move(per_doc));
}

std::vector<PseudoDocument> build_uniform_corpus(const std::vector<DocumentPair>& docs,
                                                 std::size_t l_max, std::uint64_t seed,
                                                 unsigned jobs) {
  if (l_max == 0) throw InvalidArgument("l_max must be positive");
  const std::size_t lo = std::min(kUniformBudgetMin, l_max);
  std::vector<std::vector<PseudoDocument>> per_doc(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t d) {
    Rng rng(derive_seed(seed, docs[d].doc_id));
    auto draw = [&]() -> std::size_t {
      return static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(l_max)));
    };
    per_doc[d] = pack_document(docs[d], l_max, draw);
  });
  return flatten(std::move(per_doc));
}

std::vector<PseudoDocument> build_fixed_length_testset(const std::vector<DocumentPair>& docs,
                                                       std::size_t l_max,
                                                       std::size_t tail_threshold) {
  if (l_max == 0) throw InvalidArgument("l_max must be positive");
  std::vector<PseudoDocument> out;
  for (const auto& doc : docs) {
    auto slices = pack_document(doc, l_max, [l_max] { return l_max; });
    if (slices.size() >= 2 && slices.back().src_len < tail_threshold) {
      PseudoDocument tail = std::move(slices.back());
      slices.pop_back();
      auto& last = slices.back();
      last.end = tail.end;
      last.src_len += tail.src_len;
      last.tgt_len += tail.tgt_len;
      last.tail_merged = true;
    }
    out.insert(out.end(), std::make_move_iterator(slices.begin()),
               std::make_move_iterator(slices.end()));
  }
  return out;
}

CorpusStats corpus_stats(std::span<const PseudoDocument> corpus) {
  if (corpus.empty()) throw EmptyCorpus();
  std::vector<std::size_t> src, tgt;
  src.reserve(corpus.size());
  tgt.reserve(corpus.size());
  for (const auto& p : corpus) {
    src.push_back(p.src_len);
    tgt.push_back(p.tgt_len);
  }
  return {summarize(src), summarize(tgt)};
}

CorpusStats document_stats(std::span<const DocumentPair> docs) {
  if (docs.empty()) throw EmptyCorpus();
  std::vector<std::size_t> src, tgt;
  for (const auto& d : docs) {
    src.push_back(d.src_length());
    tgt.push_back(d.tgt_length());
  }
  return {summarize(src), summarize(tgt)};
}

}  // namespace doceval
