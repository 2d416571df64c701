#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doceval/corpus_io.hpp"

namespace doceval {

/// Window ladder used when none is given.
inline const std::vector<std::size_t> kDefaultLadder = {256, 512, 768, 1024, 1200, 1600, 2048};

inline constexpr std::uint64_t kDefaultSeed = 42;

struct BuildOptions {
  std::string src;    ///< marker/blank-line text, source side
  std::string tgt;    ///< same layout, target side
  std::string jsonl;  ///< alternative to src/tgt
  Boundaries boundaries = Boundaries::kMarker;
  std::string scheme = "13a";
  std::string tgt_scheme;  ///< defaults to scheme, or 13a when scheme is external
  std::string mode = "test";  ///< test | gaussian | uniform
  std::vector<std::size_t> ladder = kDefaultLadder;
  std::uint64_t seed = kDefaultSeed;
  std::size_t tail_threshold = kTailMergeThreshold;
  std::string out;
  unsigned jobs = 1;
};

/// Builds one pseudo-document corpus per l_max plus stats.tsv and build.json.
OutputSet cmd_build(const BuildOptions& options);

struct ScoreOptions {
  std::string input;  ///< JSONL {doc_id, hyp, ref}
  std::string hyp_field = "hyp";
  std::string ref_field = "ref";
  std::vector<std::string> metrics = {"dsbleu"};
  std::string config_id = "system";
  bool merge_documents = true;  ///< concatenate lines sharing a doc_id
  std::string out;
  unsigned jobs = 1;
};

/// Writes scores.tsv, documents.tsv, units.tsv and scores.json.
OutputSet cmd_score(const ScoreOptions& options);

struct RealignOptions {
  std::vector<std::string> hyps;  ///< "CONFIG=PATH" or "PATH"; JSONL {doc_id, hyp}
  std::string refs;               ///< reference sentences with document markers
  Boundaries boundaries = Boundaries::kMarker;
  std::string scores;             ///< optional TSV [config_id] doc_id ref_index score
  std::string out;
  unsigned jobs = 1;
};

/// Writes realigned.jsonl, empty_alignments.tsv, and with scores
/// sentence_means.tsv and realign.json.
OutputSet cmd_realign(const RealignOptions& options);

struct CompareOptions {
  std::vector<std::string> tables;   ///< TSVs of config_id unit_id score, merged
  std::vector<std::string> tables2;  ///< optional second metric, for disagreement flags
  std::string metric = "ds-BLEU";
  std::vector<std::string> ladder;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> windows;  ///< windows for system pairs; defaults to the ladder
  double scale = 1.0;                ///< e.g. 100 for COMET
  std::string out;
};

/// Writes windows.tsv (adjacent windows), systems.tsv (when pairs are given)
/// and compare.json.
OutputSet cmd_compare(const CompareOptions& options);

struct PositionsOptions {
  std::vector<std::size_t> lengths;
  std::string corpus;  ///< JSONL with src_len fields, e.g. from cmd_build
  std::size_t max_length = 0;
  std::optional<std::size_t> shape_max_shift;
  std::string out;
};

/// Writes positions.csv (index, baseline, shape, unifpe) and positions.json.
OutputSet cmd_positions(const PositionsOptions& options);

struct RepeatsOptions {
  std::string input;  ///< JSONL {system, l_max, doc_id, hyp}
  std::size_t n = 10;
  std::string unit = "token";
  std::string out;
  unsigned jobs = 1;
};

/// Writes repeats.tsv (system x l_max grid) and repeats.json.
OutputSet cmd_repeats(const RepeatsOptions& options);

struct PosbiasOptions {
  std::string input;  ///< TSV system sentence_id position score
  double scale = 1.0;
  std::string out;
};

/// Writes posbias.tsv and posbias.json.
OutputSet cmd_posbias(const PosbiasOptions& options);

/// Parses "a,b,c" into trimmed items, dropping empties.
std::vector<std::string> split_list(const std::string& text);

/// Parses "A/B" into a system pair.
std::pair<std::string, std::string> parse_pair(const std::string& text);

}  // namespace doceval
