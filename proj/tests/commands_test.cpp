#include "doceval/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "doceval/error.hpp"
#include "test_support.hpp"

using namespace doceval;
using testing_support::data_path;
using testing_support::ScratchDir;
using testing_support::slurp;
using testing_support::write_file;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<std::string> cells_of(const std::string& row, char sep = '\t') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = row.find(sep, start);
    out.push_back(row.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

BuildOptions fixture_build(const std::string& out, const std::string& mode) {
  BuildOptions o;
  o.src = data_path("fixture.en");
  o.tgt = data_path("fixture.de");
  o.mode = mode;
  o.out = out;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DOCEVAL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(CorpusIo, SentenceBeforeMarkerNamesLine) {
  ScratchDir dir("io");
  write_file(dir.path() / "bad.txt", "# doc a\nfine\n");
  write_file(dir.path() / "stray.txt", "\nstray sentence\n# doc a\nfine\n");
  EXPECT_NO_THROW(read_marked_documents(dir / "bad.txt"));
  try {
    read_marked_documents(dir / "stray.txt");
    FAIL() << "expected BoundaryError";
  } catch (const BoundaryError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("stray.txt:2:"), std::string::npos);
  }
}

TEST(CorpusIo, BlankLineDocuments) {
  ScratchDir dir("io");
  write_file(dir.path() / "b.txt", "a\nb\n\n\nc\n");
  const auto docs = read_blank_separated_documents(dir / "b.txt");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].lines, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(docs[1].doc_id, "2");
}

TEST(CorpusIo, MismatchedSidesRejected) {
  ScratchDir dir("io");
  write_file(dir.path() / "s.txt", "# doc a\nx\ny\n");
  write_file(dir.path() / "t.txt", "# doc a\nx\n");
  EXPECT_THROW(load_parallel_text(dir / "s.txt", dir / "t.txt", Boundaries::kMarker, LengthScheme::whitespace(),
                                  LengthScheme::whitespace()),
               FormatError);
}

TEST(Build, TinyFixtureIsByteIdenticalAcrossRuns) {
  ScratchDir dir("build");
  write_file(dir.path() / "s.txt", "# doc a\none two three\nfour five six seven\neight\n# doc b\nnine ten\neleven twelve thirteen fourteen fifteen\n");
  write_file(dir.path() / "t.txt", "# doc a\neins zwei drei\nvier fünf sechs sieben\nacht\n# doc b\nneun zehn\nelf zwölf dreizehn vierzehn fünfzehn\n");
  for (const std::string mode : {"test", "uniform"}) {
    BuildOptions o;
    o.src = dir / "s.txt";
    o.tgt = dir / "t.txt";
    o.mode = mode;
    o.ladder = {4, 8, 16};
    o.out = dir / ("run1-" + mode);
    const auto first = cmd_build(o);
    o.out = dir / ("run2-" + mode);
    o.jobs = 3;
    const auto second = cmd_build(o);
    ASSERT_EQ(first.files().size(), second.files().size());
    for (const auto& [name, content] : first.files()) {
      EXPECT_EQ(slurp(dir.path() / ("run1-" + mode) / name), slurp(dir.path() / ("run2-" + mode) / name)) << name;
    }
  }
}

TEST(Build, GaussianRebuildIsByteIdentical) {
  ScratchDir dir("build");
  const auto a = cmd_build(fixture_build(dir / "a", "gaussian"));
  const auto b = cmd_build(fixture_build(dir / "b", "gaussian"));
  for (std::size_t i = 0; i < a.files().size(); ++i) EXPECT_EQ(a.files()[i], b.files()[i]);
  EXPECT_EQ(slurp(dir.path() / "a" / "gaussian.1024.jsonl"), a.files()[3].second);
}

TEST(Build, LadderCountsFallAndMeansRise) {
  ScratchDir dir("build");
  auto o = fixture_build(dir / "out", "test");
  o.ladder = {64, 128, 256, 512};
  cmd_build(o);
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "out" / "build.json"));
  const auto& corpora = meta["corpora"];
  ASSERT_EQ(corpora.size(), 4u);
  for (std::size_t i = 1; i < corpora.size(); ++i) {
    EXPECT_LT(corpora[i]["count"].get<std::size_t>(), corpora[i - 1]["count"].get<std::size_t>());
    EXPECT_GT(corpora[i]["src_mean"].get<double>(), corpora[i - 1]["src_mean"].get<double>());
  }
  const auto stats = lines_of(slurp(dir.path() / "out" / "stats.tsv"));
  EXPECT_EQ(stats[0], "\tdoc\t64\t128\t256\t512");
  EXPECT_EQ(cells_of(stats[1])[1], "5");
}

TEST(Build, FailureLeavesNothingBehind) {
  ScratchDir dir("build");
  write_file(dir.path() / "counts.tsv", "talk01:0\t12\n");
  auto o = fixture_build(dir / "out", "test");
  o.scheme = "external:" + (dir / "counts.tsv");
  EXPECT_THROW(cmd_build(o), MissingExternalCount);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "out"));
}

TEST(EndToEnd, IdentityScoresAndFlatComparison) {
  ScratchDir dir("e2e");
  auto b = fixture_build(dir / "build", "test");
  b.ladder = {256, 512, 768, 1024};
  cmd_build(b);
  CompareOptions c;
  for (auto l_max : b.ladder) {
    ScoreOptions s;
    s.input = (dir.path() / "build" / ("test." + std::to_string(l_max) + ".jsonl")).string();
    s.hyp_field = "tgt";
    s.ref_field = "tgt";
    s.metrics = {"bleu", "dbleu", "dsbleu"};
    s.config_id = "identity:" + std::to_string(l_max);
    s.out = dir / ("score" + std::to_string(l_max));
    cmd_score(s);
    const auto meta = nlohmann::json::parse(slurp(dir.path() / ("score" + std::to_string(l_max)) / "scores.json"));
    for (const char* m : {"bleu", "dbleu", "dsbleu"}) EXPECT_NEAR(meta["metrics"][m]["score"].get<double>(), 100.0, 1e-9);
    c.tables.push_back(dir / ("score" + std::to_string(l_max)) + "/units.tsv");
    c.ladder.push_back(std::to_string(l_max));
  }
  c.out = dir / "compare";
  cmd_compare(c);
  const auto rows = lines_of(slurp(dir.path() / "compare" / "windows.tsv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "\tidentity");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(cells_of(rows[i])[1], "-") << rows[i];
}

TEST(Score, PerLineUnitsAndTables) {
  ScratchDir dir("score");
  write_file(dir.path() / "in.jsonl",
             "{\"doc_id\": \"d1\", \"hyp\": \"the cat sat on the mat\", \"ref\": \"the cat sat on the mat\"}\n"
             "{\"doc_id\": \"d1\", \"hyp\": [\"a dog\"], \"ref\": [\"the dog\"]}\n");
  ScoreOptions s;
  s.input = dir / "in.jsonl";
  s.merge_documents = false;
  s.metrics = {"dsbleu"};
  const auto out = cmd_score(s);
  const auto units = lines_of(out.files()[1].second);
  ASSERT_EQ(units.size(), 3u);
  EXPECT_EQ(cells_of(units[1])[1], "d1#0");
  EXPECT_EQ(cells_of(units[2])[1], "d1#1");
  s.metrics = {"ter"};
  EXPECT_THROW(cmd_score(s), InvalidArgument);
}

TEST(Realign, WritesEmptiesAndMeans) {
  ScratchDir dir("realign");
  write_file(dir.path() / "refs.txt", "# doc a\nHello there.\nHow are you?\n# doc b\nGood bye.\n");
  write_file(dir.path() / "h256.jsonl",
             "{\"doc_id\": \"a\", \"hyp\": \"Hello there. How are you?\"}\n{\"doc_id\": \"b\", \"hyp\": \"\"}\n");
  write_file(dir.path() / "scores.tsv",
             "doc_id\tref_index\tscore\na\t0\t0.9\na\t1\t0.7\nb\t0\t0.2\n");
  RealignOptions r;
  r.hyps = {"NLLB:256=" + (dir / "h256.jsonl")};
  r.refs = dir / "refs.txt";
  r.scores = dir / "scores.tsv";
  r.out = dir / "out";
  cmd_realign(r);
  EXPECT_EQ(slurp(dir.path() / "out" / "empty_alignments.tsv"), "\tNLLB\n256\t1\n");
  const auto means = lines_of(slurp(dir.path() / "out" / "sentence_means.tsv"));
  ASSERT_EQ(means.size(), 3u);
  EXPECT_EQ(cells_of(means[1])[1], "a");
  EXPECT_NEAR(std::stod(cells_of(means[1])[2]), 0.8, 1e-12);
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "out" / "realign.json"));
  EXPECT_NEAR(meta["configs"][0]["corpus_mean"].get<double>(), 0.5, 1e-12);
  const auto first = nlohmann::json::parse(lines_of(slurp(dir.path() / "out" / "realigned.jsonl"))[1]);
  EXPECT_EQ(first["hyp_text"], "How are you?");
}

TEST(Realign, UnknownDocumentRejected) {
  ScratchDir dir("realign");
  write_file(dir.path() / "refs.txt", "# doc a\nHello.\n");
  write_file(dir.path() / "h.jsonl", "{\"doc_id\": \"zz\", \"hyp\": \"Hello.\"}\n");
  RealignOptions r;
  r.hyps = {dir / "h.jsonl"};
  r.refs = dir / "refs.txt";
  EXPECT_THROW(cmd_realign(r), FormatError);
}

TEST(Compare, DecayingTableIsSignificantEverywhere) {
  ScratchDir dir("compare");
  std::mt19937_64 rng(19);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::string tsv = "config_id\tunit_id\tscore\n";
  const std::vector<std::string> ladder{"sent", "256", "512", "1024", "2048"};
  for (std::size_t w = 0; w < ladder.size(); ++w) {
    for (int u = 0; u < 30; ++u) {
      tsv += "M:" + ladder[w] + "\tdoc" + std::to_string(u) + "\t" + std::to_string(40.0 - 2.0 * w + noise(rng)) + "\n";
    }
  }
  write_file(dir.path() / "t.tsv", tsv);
  CompareOptions c;
  c.tables = {dir / "t.tsv"};
  c.ladder = ladder;
  const auto out = cmd_compare(c);
  const auto rows = lines_of(out.files()[0].second);
  ASSERT_EQ(rows.size(), ladder.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cell = cells_of(rows[i])[1];
    EXPECT_NE(cell, "-");
    EXPECT_GT(std::stod(cell), 0.0);
    EXPECT_EQ(cell.find('*'), std::string::npos);
  }
}

TEST(Positions, CsvMatchesDerivedProfiles) {
  PositionsOptions p;
  p.lengths = {200};
  p.max_length = 512;
  const auto out = cmd_positions(p);
  const auto rows = lines_of(out.files()[0].second);
  ASSERT_EQ(rows.size(), 513u);
  EXPECT_EQ(rows[0], "index,baseline,shape,unifpe");
  EXPECT_EQ(rows[1].substr(0, 4), "1,1,");
  EXPECT_EQ(rows[201].substr(rows[201].rfind(',') + 1), "0.25");
  EXPECT_EQ(rows[313].substr(rows[313].rfind(',') + 1), "0.5");
  const auto last = cells_of(rows[512], ',');
  ASSERT_EQ(last.size(), 4u);
  EXPECT_EQ(last[0], "512");
  EXPECT_EQ(last[1], "0");
  EXPECT_NEAR(std::stod(last[2]), 1.0 / 313, 1e-15);
  EXPECT_EQ(last[3], "0.25");
}

TEST(Repeats, GridByLengthAndSystem) {
  ScratchDir dir("repeats");
  std::string loop;
  for (int i = 0; i < 3; ++i) loop += "one two three four five six seven eight nine ten ";
  write_file(dir.path() / "in.jsonl",
             "{\"system\": \"NLLB\", \"l_max\": 2048, \"doc_id\": \"a\", \"hyp\": \"" + loop + "\"}\n"
             "{\"system\": \"NLLB\", \"l_max\": 256, \"doc_id\": \"a\", \"hyp\": \"short and clean\"}\n"
             "{\"system\": \"NLLB\", \"l_max\": 2048, \"doc_id\": \"b\", \"hyp\": \"fine\"}\n");
  RepeatsOptions r;
  r.input = dir / "in.jsonl";
  const auto out = cmd_repeats(r);
  EXPECT_EQ(out.files()[0].second, "\t256\t2048\nNLLB\t0.00\t0.50\n");
}

TEST(Posbias, TableShape) {
  ScratchDir dir("posbias");
  std::string tsv = "system\tsentence_id\tposition\tscore\n";
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int s = 0; s < 50; ++s) {
    for (int k = 0; k < 7; ++k) {
      tsv += "NLLB\ts" + std::to_string(s) + "\t" + std::to_string(100 * (k + 1)) + "\t" +
             std::to_string(0.8 - 0.02 * k + noise(rng)) + "\n";
    }
  }
  write_file(dir.path() / "in.tsv", tsv);
  PosbiasOptions p;
  p.input = dir / "in.tsv";
  p.scale = 100;
  const auto rows = lines_of(cmd_posbias(p).files()[0].second);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[1], "p0-p1\t2.0");
  EXPECT_EQ(rows[7], "mean_positions\t100,200,300,400,500,600,700");
}

TEST(Cli, ExitCodesAndConfigFile) {
  ScratchDir dir("cli");
  EXPECT_EQ(run_cli("positions --lengths 3,5 --max-length 8 --out " + (dir / "ok")), 0);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "ok" / "positions.csv"));
  EXPECT_EQ(run_cli("positions --lengths 30 --max-length 8 --out " + (dir / "bad")), 1);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "bad"));
  write_file(dir.path() / "cfg.toml", "[positions]\nlengths = [200]\nmax-length = 512\nout = \"" + (dir / "cfg") + "\"\n");
  EXPECT_EQ(run_cli("--config " + (dir / "cfg.toml") + " positions"), 0);
  EXPECT_EQ(slurp(dir.path() / "cfg" / "positions.csv").substr(0, 28), "index,baseline,shape,unifpe\n");
}

TEST(Helpers, ListsAndPairs) {
  EXPECT_EQ(split_list(" a, b,,c "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(parse_pair("FT/Unif"), std::make_pair(std::string("FT"), std::string("Unif")));
  EXPECT_THROW(parse_pair("FT"), InvalidArgument);
}
