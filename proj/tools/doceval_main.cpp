#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doceval/commands.hpp"
#include "doceval/error.hpp"
#include "doceval/parallel.hpp"

namespace {

void print_written(const doceval::OutputSet& outputs, const std::string& dir) {
  for (const auto& [name, content] : outputs.files()) {
    std::printf("wrote %s/%s\n", dir.c_str(), name.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doceval: document-level MT evaluation toolkit"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);
  unsigned jobs = doceval::default_jobs();
  app.add_option("--jobs", jobs, "worker threads")->capture_default_str();

  // build
  doceval::BuildOptions build;
  std::string build_boundaries = "marker";
  auto* b = app.add_subcommand("build", "build pseudo-document corpora for each l_max");
  b->add_option("--src", build.src, "source sentences with '# doc <id>' markers");
  b->add_option("--tgt", build.tgt, "target sentences, same layout");
  b->add_option("--jsonl", build.jsonl, "JSONL {doc_id, src, tgt} instead of --src/--tgt");
  b->add_option("--boundaries", build_boundaries, "marker | blank")->capture_default_str();
  b->add_option("--scheme", build.scheme, "13a | ws | external:FILE")->capture_default_str();
  b->add_option("--tgt-scheme", build.tgt_scheme, "length scheme for the target side");
  b->add_option("--mode", build.mode, "test | gaussian | uniform")->capture_default_str();
  b->add_option("--l-max,--ladder", build.ladder, "window sizes")->delimiter(',')->capture_default_str();
  b->add_option("--seed", build.seed, "base seed")->capture_default_str();
  b->add_option("--tail-threshold", build.tail_threshold, "merge test-set tails shorter than this")
      ->capture_default_str();
  b->add_option("--out", build.out, "output directory")->required();

  // score
  doceval::ScoreOptions score;
  std::string metrics = "dsbleu";
  bool per_line = false;
  auto* s = app.add_subcommand("score", "score hypotheses with BLEU, d-BLEU and ds-BLEU");
  s->add_option("--input", score.input, "JSONL {doc_id, hyp, ref}")->required();
  s->add_option("--hyp-field", score.hyp_field, "JSON field holding the hypothesis")->capture_default_str();
  s->add_option("--ref-field", score.ref_field, "JSON field holding the reference")->capture_default_str();
  s->add_option("--metric", metrics, "comma list of bleu, dbleu, dsbleu")->capture_default_str();
  s->add_option("--config-id", score.config_id, "configuration id for units.tsv")->capture_default_str();
  s->add_flag("--per-line", per_line, "score every JSONL line as its own unit");
  s->add_option("--out", score.out, "output directory")->required();

  // realign
  doceval::RealignOptions realign;
  std::string realign_boundaries = "marker";
  auto* r = app.add_subcommand("realign", "re-segment document translations against reference sentences");
  r->add_option("--hyp", realign.hyps, "CONFIG=PATH of JSONL {doc_id, hyp}; repeatable")->required();
  r->add_option("--refs", realign.refs, "reference sentences with document markers")->required();
  r->add_option("--boundaries", realign_boundaries, "marker | blank")->capture_default_str();
  r->add_option("--scores", realign.scores, "TSV [config_id] doc_id ref_index score");
  r->add_option("--out", realign.out, "output directory")->required();

  // compare
  doceval::CompareOptions compare;
  std::vector<std::string> pairs;
  auto* c = app.add_subcommand("compare", "paired t-tests across windows or systems");
  c->add_option("--scores", compare.tables, "TSV config_id unit_id score; repeatable")->required();
  c->add_option("--scores2", compare.tables2, "second metric, to flag disagreements; repeatable");
  c->add_option("--metric", compare.metric, "metric name for reports")->capture_default_str();
  c->add_option("--l-max,--ladder", compare.ladder, "window labels, shortest first")->delimiter(',');
  c->add_option("--pairs", pairs, "system pairs A/B")->delimiter(',');
  c->add_option("--windows", compare.windows, "windows for system pairs")->delimiter(',');
  c->add_option("--scale", compare.scale, "multiply scores, e.g. 100")->capture_default_str();
  c->add_option("--out", compare.out, "output directory")->required();

  // positions
  doceval::PositionsOptions positions;
  std::size_t max_shift = 0;
  auto* p = app.add_subcommand("positions", "positional coverage of baseline, SHAPE and unifPE");
  p->add_option("--lengths", positions.lengths, "sequence lengths")->delimiter(',');
  p->add_option("--corpus", positions.corpus, "JSONL with src_len fields");
  p->add_option("--max-length", positions.max_length, "model maximum length M")->required();
  auto* shift_opt = p->add_option("--shape-max-shift", max_shift, "cap SHAPE offsets");
  p->add_option("--out", positions.out, "output directory")->required();

  // repeats
  doceval::RepeatsOptions repeats;
  auto* rp = app.add_subcommand("repeats", "rate of documents containing a long repeated span");
  rp->add_option("--input", repeats.input, "JSONL {system, l_max, doc_id, hyp}")->required();
  rp->add_option("-n,--length", repeats.n, "minimum span length")->capture_default_str();
  rp->add_option("--unit", repeats.unit, "token | char")->capture_default_str();
  rp->add_option("--out", repeats.out, "output directory")->required();

  // posbias
  doceval::PosbiasOptions posbias;
  auto* pb = app.add_subcommand("posbias", "sentence-position bias from injected-sentence scores");
  pb->add_option("--input", posbias.input, "TSV system sentence_id position score")->required();
  pb->add_option("--scale", posbias.scale, "multiply scores, e.g. 100")->capture_default_str();
  pb->add_option("--out", posbias.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*b) {
      build.boundaries = doceval::parse_boundaries(build_boundaries);
      build.jobs = jobs;
      print_written(doceval::cmd_build(build), build.out);
    } else if (*s) {
      score.metrics = doceval::split_list(metrics);
      score.merge_documents = !per_line;
      score.jobs = jobs;
      print_written(doceval::cmd_score(score), score.out);
    } else if (*r) {
      realign.boundaries = doceval::parse_boundaries(realign_boundaries);
      realign.jobs = jobs;
      print_written(doceval::cmd_realign(realign), realign.out);
    } else if (*c) {
      for (const auto& pair : pairs) compare.pairs.push_back(doceval::parse_pair(pair));
      print_written(doceval::cmd_compare(compare), compare.out);
    } else if (*p) {
      if (shift_opt->count()) positions.shape_max_shift = max_shift;
      print_written(doceval::cmd_positions(positions), positions.out);
    } else if (*rp) {
      repeats.jobs = jobs;
      print_written(doceval::cmd_repeats(repeats), repeats.out);
    } else if (*pb) {
      print_written(doceval::cmd_posbias(posbias), posbias.out);
    }
  } catch (const doceval::Error& e) {
    std::fprintf(stderr, "doceval: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "doceval: unexpected error: %s\n", e.what());
    return 2;
  }
  return 0;
}
