#include "doceval/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doceval/error.hpp"
#include "doceval/metrics.hpp"
#include "doceval/parallel.hpp"
#include "doceval/positions.hpp"
#include "doceval/realign.hpp"
#include "doceval/repetition.hpp"
#include "doceval/report.hpp"
#include "doceval/stats.hpp"

namespace doceval {
namespace {

using ojson = nlohmann::ordered_json;

void finish(OutputSet& outputs, const std::string& out_dir) {
  if (!out_dir.empty()) outputs.commit();
}

std::string dump(const ojson& value) { return value.dump(2) + "\n"; }

std::string json_id(const nlohmann::json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Splits a TSV line into fields.
std::vector<std::string> tsv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(const std::string& text, T& value) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

ojson bleu_json(const BleuScore& s) {
  ojson j;
  j["score"] = s.score;
  j["brevity_penalty"] = s.brevity_penalty;
  j["hyp_len"] = s.hyp_len;
  j["ref_len"] = s.ref_len;
  j["precisions"] = s.precisions;
  j["matches"] = s.stats.matches;
  j["totals"] = s.stats.totals;
  j["orders_used"] = s.orders_used;
  j["report"] = format_score_bp(s);
  return j;
}

ojson test_json(const PairedTestResult& r) {
  ojson j;
  j["mean_diff"] = r.mean_diff;
  // Infinite t (degenerate zero-variance case) is not representable in JSON.
  if (std::isfinite(r.t_stat)) {
    j["t_stat"] = r.t_stat;
  } else {
    j["t_stat"] = r.t_stat > 0 ? "inf" : "-inf";
  }
  j["p_value"] = r.p_value;
  j["n"] = r.n;
  j["degenerate"] = r.degenerate;
  switch (r.tier()) {
    case SignificanceTier::kStrong:
      j["tier"] = "p<=0.01";
      break;
    case SignificanceTier::kWeak:
      j["tier"] = "0.01<p<=0.05";
      break;
    case SignificanceTier::kNone:
      j["tier"] = "p>0.05";
      break;
  }
  return j;
}

// Merges several score files into one table, multiplying every score by factor.
ScoreTable load_tables(const std::vector<std::string>& paths, const std::string& metric, double factor) {
  ScoreTable out(metric);
  for (const auto& path : paths) {
    const auto table = ScoreTable::from_tsv(path, metric);
    for (const auto& config : table.configs()) {
      for (const auto& [unit, score] : table.units(config)) out.add(config, unit, score * factor);
    }
  }
  return out;
}

// Orders l_max labels numerically when they are all integers, else keeps first-seen order.
std::vector<std::string> order_labels(std::vector<std::string> labels) {
  bool numeric = true;
  for (const auto& l : labels) {
    long long v = 0;
    numeric = numeric && parse_number(l, v);
  }
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  }
  return labels;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    auto item = trim(std::string_view(text).substr(start, comma - start));
    if (!item.empty()) items.push_back(item);
    start = comma + 1;
  }
  return items;
}

std::pair<std::string, std::string> parse_pair(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) {
    throw InvalidArgument("system pair '" + text + "' must look like A/B");
  }
  return {trim(std::string_view(text).substr(0, slash)), trim(std::string_view(text).substr(slash + 1))};
}

// ---------------------------------------------------------------------------
// build

OutputSet cmd_build(const BuildOptions& o) {
  const LengthScheme src_scheme = LengthScheme::parse(o.scheme);
  std::string tgt_spec = o.tgt_scheme;
  if (tgt_spec.empty()) tgt_spec = src_scheme.variant() == LengthVariant::kExternal ? "13a" : o.scheme;
  const LengthScheme tgt_scheme = LengthScheme::parse(tgt_spec);

  std::vector<DocumentPair> docs;
  if (!o.jsonl.empty()) {
    docs = load_parallel_jsonl(o.jsonl, src_scheme, tgt_scheme);
  } else {
    if (o.src.empty() || o.tgt.empty()) throw InvalidArgument("build needs --src and --tgt, or --jsonl");
    docs = load_parallel_text(o.src, o.tgt, o.boundaries, src_scheme, tgt_scheme);
  }
  if (docs.empty()) throw EmptyCorpus("no documents in build input");
  if (o.ladder.empty()) throw InvalidArgument("build needs at least one l_max");
  if (o.mode != "test" && o.mode != "gaussian" && o.mode != "uniform") {
    throw InvalidArgument("unknown build mode '" + o.mode + "' (expected test, gaussian or uniform)");
  }

  ojson meta;
  meta["command"] = "build";
  meta["mode"] = o.mode;
  meta["seed"] = o.seed;
  meta["scheme"] = src_scheme.name();
  meta["tgt_scheme"] = tgt_scheme.name();
  meta["ladder"] = o.ladder;
  meta["documents"] = docs.size();
  if (o.mode == "test") meta["tail_threshold"] = o.tail_threshold;
  if (o.mode == "uniform") meta["uniform_budget_min"] = kUniformBudgetMin;

  GaussianParams params;
  if (o.mode == "gaussian") {
    std::vector<std::size_t> lengths;
    for (const auto& d : docs) lengths.push_back(d.src_length());
    params = fit_length_distribution(lengths);
    meta["gaussian"] = {{"fitted_mean", params.mean},
                        {"fitted_stddev", params.stddev},
                        {"scaling", "mean and stddev scaled by l_max / longest document; "
                                    "draws rounded and rejected outside [shortest sentence, l_max)"}};
  }

  OutputSet outputs(o.out);
  std::vector<std::pair<std::string, CorpusStats>> columns{{"doc", document_stats(docs)}};
  std::map<std::string, const DocumentPair*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;

  ojson per_l_max = ojson::array();
  for (std::size_t l_max : o.ladder) {
    std::vector<PseudoDocument> corpus;
    ojson entry;
    entry["l_max"] = l_max;
    if (o.mode == "test") {
      corpus = build_fixed_length_testset(docs, l_max, o.tail_threshold);
    } else if (o.mode == "uniform") {
      corpus = build_uniform_corpus(docs, l_max, o.seed, o.jobs);
    } else {
      corpus = build_gaussian_corpus(docs, l_max, params, o.seed, o.jobs);
      const auto budget = scale_gaussian_budget(docs, l_max, params);
      entry["budget_mean"] = budget.mean;
      entry["budget_stddev"] = budget.stddev;
      entry["budget_min"] = budget.min_budget;
    }

    std::string lines;
    std::size_t overflow = 0, merged = 0;
    for (const auto& pd : corpus) {
      const DocumentPair& doc = *by_id.at(pd.doc_id);
      ojson j;
      j["doc_id"] = pd.doc_id;
      j["index"] = pd.index;
      j["start"] = pd.start;
      j["end"] = pd.end;
      j["src_len"] = pd.src_len;
      j["tgt_len"] = pd.tgt_len;
      j["budget"] = pd.budget;
      j["overflow"] = pd.overflow;
      j["tail_merged"] = pd.tail_merged;
      ojson src = ojson::array(), tgt = ojson::array();
      for (std::size_t i = pd.start; i < pd.end; ++i) {
        src.push_back(doc.pairs[i].src);
        tgt.push_back(doc.pairs[i].tgt);
      }
      j["src"] = std::move(src);
      j["tgt"] = std::move(tgt);
      lines += j.dump() + "\n";
      overflow += pd.overflow ? 1 : 0;
      merged += pd.tail_merged ? 1 : 0;
    }
    const std::string name = o.mode + "." + std::to_string(l_max) + ".jsonl";
    outputs.add(name, std::move(lines));
    const auto stats = corpus_stats(corpus);
    columns.emplace_back(std::to_string(l_max), stats);
    entry["file"] = name;
    entry["count"] = stats.src.count;
    entry["src_mean"] = stats.src.mean;
    entry["overflow"] = overflow;
    entry["tail_merged"] = merged;
    per_l_max.push_back(std::move(entry));
  }
  meta["corpora"] = std::move(per_l_max);
  outputs.add("stats.tsv", report::stats_table(columns));
  outputs.add("build.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// score

OutputSet cmd_score(const ScoreOptions& o) {
  ScoredCorpus corpus;
  std::vector<std::string> unit_ids;
  std::map<std::string, std::size_t> position;
  std::map<std::string, std::size_t> seen_lines;
  for_each_jsonl(o.input, [&](const nlohmann::json& obj, std::size_t line_no) {
    if (!obj.contains("doc_id") || !obj.contains(o.hyp_field) || !obj.contains(o.ref_field)) {
      throw FormatError(o.input, line_no, "expected fields doc_id, " + o.hyp_field + ", " + o.ref_field);
    }
    const std::string doc_id = json_id(obj["doc_id"]);
    auto hyp = string_list(obj[o.hyp_field], o.input, line_no, o.hyp_field.c_str());
    auto ref = string_list(obj[o.ref_field], o.input, line_no, o.ref_field.c_str());
    std::string unit = doc_id;
    if (!o.merge_documents) unit += "#" + std::to_string(seen_lines[doc_id]++);
    auto [it, inserted] = position.try_emplace(unit, corpus.documents.size());
    if (inserted) {
      corpus.documents.push_back({unit, {}, {}});
      unit_ids.push_back(unit);
    }
    auto& doc = corpus.documents[it->second];
    doc.hyp.insert(doc.hyp.end(), hyp.begin(), hyp.end());
    doc.ref.insert(doc.ref.end(), ref.begin(), ref.end());
  });
  if (corpus.documents.empty()) throw EmptyCorpus("no documents in '" + o.input + "'");

  ojson meta;
  meta["command"] = "score";
  meta["config_id"] = o.config_id;
  meta["documents"] = corpus.documents.size();
  meta["merge_documents"] = o.merge_documents;
  meta["tokenizer"] = "13a";
  meta["signature"] = "nrefs:1|case:mixed|tok:13a|smooth:exp; eff:no for bleu/dbleu, eff:yes for dsbleu";

  std::string table = "metric\tscore\tbp\thyp_len\tref_len\tp1\tp2\tp3\tp4\treport\n";
  auto row = [&](const std::string& name, double score, const BleuScore& b) {
    table += name + "\t" + number_text(score) + "\t" + number_text(b.brevity_penalty) + "\t" +
             std::to_string(b.hyp_len) + "\t" + std::to_string(b.ref_len);
    for (double p : b.precisions) table += "\t" + number_text(p);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f (%.2f)", score, b.brevity_penalty);
    table += std::string("\t") + buf + "\n";
  };

  OutputSet outputs(o.out);
  ojson metrics;
  for (const auto& metric : o.metrics) {
    if (metric == "bleu") {
      corpus.granularity = Granularity::kSentence;
      const auto s = sentence_bleu(corpus);
      metrics["bleu"] = bleu_json(s);
      row("bleu", s.score, s);
    } else if (metric == "dbleu") {
      const auto s = d_bleu(corpus);
      metrics["dbleu"] = bleu_json(s);
      row("dbleu", s.score, s);
    } else if (metric == "dsbleu") {
      const auto ds = ds_bleu(corpus, o.jobs);
      NgramStats pooled;
      for (const auto& d : ds.per_document) pooled += d.stats;
      BleuScore summary = score_from_stats(pooled, {Smoothing::kExponential, true});
      ojson j;
      j["score"] = ds.corpus_score;
      j["averaging"] = "unweighted mean over documents";
      j["brevity_penalty"] = summary.brevity_penalty;
      j["hyp_len"] = summary.hyp_len;
      j["ref_len"] = summary.ref_len;
      ojson docs = ojson::array();
      std::string doc_table = "doc_id\tds_bleu\tbp\thyp_len\tref_len\treport\n";
      std::string units = "config_id\tunit_id\tscore\n";
      for (std::size_t i = 0; i < ds.per_document.size(); ++i) {
        const auto& d = ds.per_document[i];
        ojson dj = bleu_json(d);
        dj["doc_id"] = unit_ids[i];
        docs.push_back(std::move(dj));
        doc_table += unit_ids[i] + "\t" + number_text(d.score) + "\t" + number_text(d.brevity_penalty) +
                     "\t" + std::to_string(d.hyp_len) + "\t" + std::to_string(d.ref_len) + "\t" +
                     format_score_bp(d) + "\n";
        units += o.config_id + "\t" + unit_ids[i] + "\t" + number_text(d.score) + "\n";
      }
      j["per_document"] = std::move(docs);
      metrics["dsbleu"] = std::move(j);
      // The corpus row reports the pooled brevity penalty alongside the macro score.
      row("dsbleu", ds.corpus_score, summary);
      outputs.add("documents.tsv", std::move(doc_table));
      outputs.add("units.tsv", std::move(units));
    } else {
      throw InvalidArgument("unknown metric '" + metric + "' (expected bleu, dbleu or dsbleu)");
    }
  }
  meta["metrics"] = std::move(metrics);
  outputs.add("scores.tsv", std::move(table));
  outputs.add("scores.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// realign

OutputSet cmd_realign(const RealignOptions& o) {
  if (o.hyps.empty()) throw InvalidArgument("realign needs at least one --hyp");
  const auto ref_docs = read_documents(o.refs, o.boundaries);
  std::map<std::string, const RawDocument*> refs;
  for (const auto& d : ref_docs) refs[d.doc_id] = &d;

  struct ConfigRun {
    std::string config_id;
    std::vector<RealignedDocument> docs;
  };
  std::vector<ConfigRun> runs;
  for (const auto& spec : o.hyps) {
    ConfigRun run;
    std::string path = spec;
    if (auto eq = spec.find('='); eq != std::string::npos) {
      run.config_id = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      run.config_id = std::filesystem::path(spec).stem().string();
    }
    std::vector<std::string> order;
    std::map<std::string, std::string> text;
    for_each_jsonl(path, [&](const nlohmann::json& obj, std::size_t line_no) {
      if (!obj.contains("doc_id") || !obj.contains("hyp")) {
        throw FormatError(path, line_no, "expected fields doc_id, hyp");
      }
      const std::string id = json_id(obj["doc_id"]);
      if (!refs.count(id)) throw FormatError(path, line_no, "no reference document '" + id + "'");
      std::string joined;
      for (const auto& part : string_list(obj["hyp"], path, line_no, "hyp")) {
        if (!joined.empty()) joined.push_back(' ');
        joined += part;
      }
      auto [it, inserted] = text.try_emplace(id);
      if (inserted) {
        order.push_back(id);
        it->second = std::move(joined);
      } else if (!joined.empty()) {
        if (!it->second.empty()) it->second.push_back(' ');
        it->second += joined;
      }
    });
    run.docs.resize(order.size());
    parallel_for(order.size(), o.jobs, [&](std::size_t i) {
      const auto& ref = *refs.at(order[i]);
      if (ref.lines.empty()) throw FormatError(o.refs, ref.line_no, "document '" + ref.doc_id + "' has no sentences");
      run.docs[i] = realign_document(order[i], text[order[i]], ref.lines);
    });
    runs.push_back(std::move(run));
  }

  OutputSet outputs(o.out);
  std::string lines;
  std::vector<report::EmptyAlignmentCell> cells;
  ojson meta;
  meta["command"] = "realign";
  ojson configs = ojson::array();
  for (const auto& run : runs) {
    std::size_t empties = 0, cost = 0, sentences = 0;
    for (const auto& doc : run.docs) {
      const auto& ref = *refs.at(doc.doc_id);
      for (std::size_t i = 0; i < doc.hyp_text.size(); ++i) {
        ojson j;
        j["config_id"] = run.config_id;
        j["doc_id"] = doc.doc_id;
        j["ref_index"] = i;
        j["hyp_text"] = doc.hyp_text[i];
        j["ref_text"] = ref.lines[i];
        j["empty"] = doc.alignment.result.pairs[i].hyp.empty();
        lines += j.dump() + "\n";
      }
      empties += doc.alignment.result.empty_count;
      cost += doc.alignment.result.total_cost;
      sentences += doc.hyp_text.size();
    }
    const auto id = ConfigId::parse(run.config_id);
    cells.push_back({id.system, id.window.empty() ? std::string("-") : id.window, empties});
    configs.push_back({{"config_id", run.config_id},
                       {"documents", run.docs.size()},
                       {"sentences", sentences},
                       {"empty_alignments", empties},
                       {"total_edit_cost", cost}});
  }
  outputs.add("realigned.jsonl", std::move(lines));
  outputs.add("empty_alignments.tsv", report::empty_alignment_grid(cells));

  if (!o.scores.empty()) {
    std::map<std::string, SentenceScores> by_config;
    std::ifstream in(o.scores);
    if (!in) throw IoError("cannot open score file '" + o.scores + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto f = tsv_fields(line);
      if (f.size() != 3 && f.size() != 4) {
        throw FormatError(o.scores, line_no, "expected [config_id] doc_id ref_index score");
      }
      const std::string config = f.size() == 4 ? f[0] : "*";
      const std::size_t base = f.size() == 4 ? 1 : 0;
      std::size_t index = 0;
      double score = 0.0;
      if (!parse_number(f[base + 1], index) || !parse_number(f[base + 2], score)) {
        if (line_no == 1) continue;
        throw FormatError(o.scores, line_no, "bad ref_index or score");
      }
      by_config[config][{f[base], index}] = score;
    }
    std::string means = "config_id\tunit_id\tscore\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      auto it = by_config.find(runs[r].config_id);
      if (it == by_config.end()) it = by_config.find("*");
      if (it == by_config.end()) throw MissingScore("no scores for configuration '" + runs[r].config_id + "'");
      try {
        const auto agg = attach_scores(runs[r].docs, it->second);
        for (const auto& [doc, mean] : agg.per_document) {
          means += runs[r].config_id + "\t" + doc + "\t" + number_text(mean) + "\n";
        }
        configs[r]["corpus_mean"] = agg.corpus_mean;
        configs[r]["scored_sentences"] = agg.sentences;
        configs[r]["scored_empty_sentences"] = agg.empty_sentences;
      } catch (const MissingScore& e) {
        throw MissingScore("configuration '" + runs[r].config_id + "': " + e.what());
      }
    }
    meta["averaging"] = "per-document mean of sentence scores; corpus mean is the unweighted mean of document means";
    meta["empty_hypotheses"] = "scored with the externally supplied value";
    outputs.add("sentence_means.tsv", std::move(means));
  }
  meta["configs"] = std::move(configs);
  outputs.add("realign.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// compare

OutputSet cmd_compare(const CompareOptions& o) {
  if (o.tables.empty()) throw InvalidArgument("compare needs at least one score table");
  const ScoreTable table = load_tables(o.tables, o.metric, o.scale);
  std::optional<ScoreTable> other;
  if (!o.tables2.empty()) other = load_tables(o.tables2, "second", o.scale);
  if (o.ladder.size() < 2 && o.pairs.empty()) {
    throw InvalidArgument("compare needs a ladder of at least two windows or system pairs");
  }

  OutputSet outputs(o.out);
  ojson meta;
  meta["command"] = "compare";
  meta["metric"] = o.metric;
  meta["scale"] = o.scale;
  meta["test"] = "two-sided paired t-test, n-1 degrees of freedom";
  meta["ladder"] = o.ladder;

  if (o.ladder.size() >= 2) {
    const auto cells = compare_adjacent_windows(table, o.ladder);
    outputs.add("windows.tsv", report::window_table(cells, o.ladder, table.systems()));
    ojson arr = ojson::array();
    for (const auto& c : cells) {
      ojson j = test_json(c.result);
      j["system"] = c.system;
      j["shorter"] = c.shorter;
      j["longer"] = c.longer;
      j["cell"] = report::difference_cell(c.result);
      arr.push_back(std::move(j));
    }
    meta["adjacent_windows"] = std::move(arr);
  }
  if (!o.pairs.empty()) {
    const auto& windows = o.windows.empty() ? o.ladder : o.windows;
    if (windows.empty()) throw InvalidArgument("system comparison needs --windows or --ladder");
    const auto cells = compare_systems(table, o.pairs, windows, other ? &*other : nullptr);
    outputs.add("systems.tsv", report::system_table(cells, o.pairs, windows));
    ojson arr = ojson::array();
    for (const auto& c : cells) {
      ojson j = test_json(c.result);
      j["window"] = c.window;
      j["system_a"] = c.system_a;
      j["system_b"] = c.system_b;
      j["metrics_disagree"] = c.metrics_disagree;
      j["cell"] = report::difference_with_p_cell(c.result, c.metrics_disagree);
      arr.push_back(std::move(j));
    }
    meta["systems"] = std::move(arr);
  }
  outputs.add("compare.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// positions

OutputSet cmd_positions(const PositionsOptions& o) {
  if (o.max_length == 0) throw InvalidArgument("positions needs --max-length > 0");
  std::vector<std::size_t> lengths = o.lengths;
  if (!o.corpus.empty()) {
    for_each_jsonl(o.corpus, [&](const nlohmann::json& obj, std::size_t line_no) {
      if (!obj.contains("src_len") || !obj["src_len"].is_number_unsigned()) {
        throw FormatError(o.corpus, line_no, "expected a non-negative integer src_len");
      }
      lengths.push_back(obj["src_len"].get<std::size_t>());
    });
  }
  if (lengths.empty()) throw EmptyCorpus("positions needs --lengths or --corpus");

  const Sampler samplers[] = {Sampler::kBaseline, Sampler::kShape, Sampler::kUnifPE};
  std::vector<CoverageProfile> profiles;
  for (auto s : samplers) profiles.push_back(coverage_profile(lengths, s, o.max_length, o.shape_max_shift));

  std::string csv = "index,baseline,shape,unifpe\n";
  for (std::size_t i = 1; i <= o.max_length; ++i) {
    csv += std::to_string(i);
    for (const auto& p : profiles) csv += "," + number_text(p.at(i));
    csv += "\n";
  }

  double mean = 0.0;
  for (auto l : lengths) mean += static_cast<double>(l);
  mean /= static_cast<double>(lengths.size());

  ojson meta;
  meta["command"] = "positions";
  meta["max_length"] = o.max_length;
  meta["sequences"] = lengths.size();
  meta["mean_length"] = mean;
  meta["shape_interval"] = o.shape_max_shift ? "[0, min(max_shift, M - l)]" : "[0, M - l]";
  if (o.shape_max_shift) meta["shape_max_shift"] = *o.shape_max_shift;
  meta["unifpe_gap_index"] = "g uniform over {1..m}; g = m inserts no gap";
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    double mass = 0.0;
    for (double p : profiles[k].p) mass += p;
    meta["samplers"][sampler_name(samplers[k])] = {{"flatness", flatness(profiles[k])}, {"mass", mass}};
  }

  OutputSet outputs(o.out);
  outputs.add("positions.csv", std::move(csv));
  outputs.add("positions.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// repeats

OutputSet cmd_repeats(const RepeatsOptions& o) {
  const RepeatUnit unit = parse_repeat_unit(o.unit);
  std::vector<RepetitionInput> docs;
  std::vector<std::string> systems, l_max_values;
  std::set<std::string> seen_systems, seen_l_max;
  for_each_jsonl(o.input, [&](const nlohmann::json& obj, std::size_t line_no) {
    if (!obj.contains("system") || !obj.contains("l_max") || !obj.contains("hyp")) {
      throw FormatError(o.input, line_no, "expected fields system, l_max, hyp (and doc_id)");
    }
    RepetitionInput in;
    in.system = json_id(obj["system"]);
    in.l_max = json_id(obj["l_max"]);
    in.doc_id = obj.contains("doc_id") ? json_id(obj["doc_id"]) : std::to_string(line_no);
    for (const auto& part : string_list(obj["hyp"], o.input, line_no, "hyp")) {
      if (!in.text.empty()) in.text.push_back(' ');
      in.text += part;
    }
    if (seen_systems.insert(in.system).second) systems.push_back(in.system);
    if (seen_l_max.insert(in.l_max).second) l_max_values.push_back(in.l_max);
    docs.push_back(std::move(in));
  });
  const auto reports = repetition_rate(docs, o.n, unit, o.jobs);
  l_max_values = order_labels(l_max_values);

  ojson meta;
  meta["command"] = "repeats";
  meta["n"] = o.n;
  meta["unit"] = unit == RepeatUnit::kCharacters ? "char" : "token";
  meta["scope"] = "whole pseudo-document, including sentence boundaries";
  ojson groups = ojson::array();
  for (const auto& [key, report] : reports) {
    ojson flagged = ojson::array();
    for (const auto& [id, hit] : report.per_document) {
      if (hit) flagged.push_back(id);
    }
    groups.push_back({{"system", key.first},
                      {"l_max", key.second},
                      {"documents", report.per_document.size()},
                      {"rate", report.rate},
                      {"flagged", std::move(flagged)}});
  }
  meta["groups"] = std::move(groups);

  OutputSet outputs(o.out);
  outputs.add("repeats.tsv", report::repetition_grid(reports, systems, l_max_values));
  outputs.add("repeats.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

// ---------------------------------------------------------------------------
// posbias

OutputSet cmd_posbias(const PosbiasOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw IoError("cannot open '" + o.input + "'");
  std::vector<std::tuple<std::string, std::string, std::size_t, double>> rows;
  std::vector<std::string> systems;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = tsv_fields(line);
    if (f.size() != 4) throw FormatError(o.input, line_no, "expected system sentence_id position score");
    std::size_t position = 0;
    double score = 0.0;
    if (!parse_number(f[2], position) || !parse_number(f[3], score)) {
      if (line_no == 1) continue;
      throw FormatError(o.input, line_no, "bad position or score");
    }
    if (seen.insert(f[0]).second) systems.push_back(f[0]);
    rows.emplace_back(f[0], f[1], position, score * o.scale);
  }
  const auto grouped = group_position_rows(rows);

  std::vector<PositionBiasResult> results;
  ojson meta;
  meta["command"] = "posbias";
  meta["scale"] = o.scale;
  ojson arr = ojson::array();
  for (const auto& system : systems) {
    results.push_back(position_bias_analysis(system, grouped.at(system)));
    const auto& r = results.back();
    ojson j;
    j["system"] = system;
    j["sentences"] = grouped.at(system).size();
    j["mean_positions"] = r.mean_positions;
    ojson tests = ojson::array();
    for (std::size_t k = 0; k + 1 < kPositionCount; ++k) {
      ojson t = test_json(r.consecutive[k]);
      t["pair"] = "p" + std::to_string(k) + "-p" + std::to_string(k + 1);
      t["cell"] = report::difference_cell(r.consecutive[k]);
      tests.push_back(std::move(t));
    }
    j["consecutive"] = std::move(tests);
    arr.push_back(std::move(j));
  }
  meta["systems"] = std::move(arr);

  OutputSet outputs(o.out);
  outputs.add("posbias.tsv", report::position_table(results));
  outputs.add("posbias.json", dump(meta));
  finish(outputs, o.out);
  return outputs;
}

}  // namespace doceval
