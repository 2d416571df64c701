#include "doceval/corpus_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "doceval/error.hpp"

namespace doceval {
namespace {

constexpr std::string_view kMarker = "# doc ";

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string trim_copy(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Boundaries parse_boundaries(const std::string& name) {
  if (name == "marker") return Boundaries::kMarker;
  if (name == "blank") return Boundaries::kBlankLine;
  throw InvalidArgument("unknown boundary style '" + name + "' (expected marker or blank)");
}

std::vector<RawDocument> read_marked_documents(const std::string& path) {
  auto in = open_input(path);
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.rfind(kMarker, 0) == 0) {
      std::string id = trim_copy(std::string_view(line).substr(kMarker.size()));
      if (id.empty()) throw BoundaryError(path, line_no, "document marker without an id");
      docs.push_back({std::move(id), {}, line_no});
      continue;
    }
    if (line.empty()) continue;
    if (docs.empty()) {
      throw BoundaryError(path, line_no, "sentence before the first '# doc <id>' marker");
    }
    docs.back().lines.push_back(line);
  }
  return docs;
}

std::vector<RawDocument> read_blank_separated_documents(const std::string& path) {
  auto in = open_input(path);
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  bool open = false;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) {
      open = false;
      continue;
    }
    if (!open) {
      docs.push_back({std::to_string(docs.size() + 1), {}, line_no});
      open = true;
    }
    docs.back().lines.push_back(line);
  }
  return docs;
}

std::vector<RawDocument> read_documents(const std::string& path, Boundaries boundaries) {
  return boundaries == Boundaries::kMarker ? read_marked_documents(path)
                                           : read_blank_separated_documents(path);
}

void for_each_jsonl(const std::string& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& on_line) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!value.is_object()) throw FormatError(path, line_no, "expected a JSON object");
    on_line(value, line_no);
  }
}

std::string sentence_id(const std::string& doc_id, std::size_t index, bool target) {
  std::string id = doc_id + ":" + std::to_string(index);
  if (target) id += ":tgt";
  return id;
}

namespace {

DocumentPair measure(std::string doc_id, const std::vector<std::string>& src,
                     const std::vector<std::string>& tgt, const LengthScheme& src_scheme,
                     const LengthScheme& tgt_scheme) {
  DocumentPair doc;
  doc.doc_id = std::move(doc_id);
  doc.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    SentencePair pair;
    pair.src = src[i];
    pair.tgt = tgt[i];
    pair.src_len = sentence_length(sentence_id(doc.doc_id, i, false), src[i], src_scheme);
    pair.tgt_len = sentence_length(sentence_id(doc.doc_id, i, true), tgt[i], tgt_scheme);
    doc.pairs.push_back(std::move(pair));
  }
  return doc;
}

}  // namespace

std::vector<DocumentPair> load_parallel_text(const std::string& src_path,
                                             const std::string& tgt_path, Boundaries boundaries,
                                             const LengthScheme& src_scheme,
                                             const LengthScheme& tgt_scheme) {
  const auto src = read_documents(src_path, boundaries);
  const auto tgt = read_documents(tgt_path, boundaries);
  if (src.size() != tgt.size()) {
    throw FormatError(tgt_path, 0, "has " + std::to_string(tgt.size()) + " documents but '" +
                                       src_path + "' has " + std::to_string(src.size()));
  }
  std::vector<DocumentPair> docs;
  docs.reserve(src.size());
  for (std::size_t d = 0; d < src.size(); ++d) {
    if (src[d].doc_id != tgt[d].doc_id) {
      throw FormatError(tgt_path, tgt[d].line_no,
                        "document '" + tgt[d].doc_id + "' does not match source document '" +
                            src[d].doc_id + "'");
    }
    if (src[d].lines.size() != tgt[d].lines.size()) {
      throw FormatError(tgt_path, tgt[d].line_no,
                        "document '" + tgt[d].doc_id + "' has " +
                            std::to_string(tgt[d].lines.size()) + " sentences, source has " +
                            std::to_string(src[d].lines.size()));
    }
    docs.push_back(measure(src[d].doc_id, src[d].lines, tgt[d].lines, src_scheme, tgt_scheme));
  }
  return docs;
}

std::vector<std::string> string_list(const nlohmann::json& value, const std::string& path,
                                     std::size_t line_no, const char* field) {
  if (value.is_string()) return {value.get<std::string>()};
  if (!value.is_array()) {
    throw FormatError(path, line_no, std::string("field '") + field + "' must be a string or array");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw FormatError(path, line_no, std::string("field '") + field + "' must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<DocumentPair> load_parallel_jsonl(const std::string& path,
                                              const LengthScheme& src_scheme,
                                              const LengthScheme& tgt_scheme) {
  std::vector<DocumentPair> docs;
  for_each_jsonl(path, [&](const nlohmann::json& obj, std::size_t line_no) {
    if (!obj.contains("doc_id") || !obj.contains("src") || !obj.contains("tgt")) {
      throw FormatError(path, line_no, "expected fields doc_id, src, tgt");
    }
    std::string id = obj["doc_id"].is_string() ? obj["doc_id"].get<std::string>() : obj["doc_id"].dump();
    auto src = string_list(obj["src"], path, line_no, "src");
    auto tgt = string_list(obj["tgt"], path, line_no, "tgt");
    if (src.size() != tgt.size()) {
      throw FormatError(path, line_no, "src and tgt have different sentence counts");
    }
    docs.push_back(measure(std::move(id), src, tgt, src_scheme, tgt_scheme));
  });
  return docs;
}

std::string number_text(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void OutputSet::add(const std::string& name, std::string content) {
  files_.emplace_back(name, std::move(content));
}

void OutputSet::commit() {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());

  std::vector<fs::path> staged;
  auto discard = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files_) {
    fs::path tmp = dir_ / ("." + name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      staged.push_back(tmp);
      discard();
      throw IoError("cannot write '" + tmp.string() + "'");
    }
    staged.push_back(tmp);
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    fs::rename(staged[i], dir_ / files_[i].first, ec);
    if (ec) {
      discard();
      throw IoError("cannot rename into '" + (dir_ / files_[i].first).string() + "': " + ec.message());
    }
  }
}

}  // namespace doceval
