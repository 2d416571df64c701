#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "doceval/databuild.hpp"
#include "doceval/tokenizer.hpp"

namespace doceval {

/// Lines of one document and the 1-based line number of its marker.
struct RawDocument {
  std::string doc_id;
  std::vector<std::string> lines;
  std::size_t line_no = 0;
};

enum class Boundaries { kMarker, kBlankLine };

Boundaries parse_boundaries(const std::string& name);

/// Marker format: a line "# doc <id>" opens each document, every other
/// non-empty line is a sentence. Throws BoundaryError for a sentence before
/// the first marker.
std::vector<RawDocument> read_marked_documents(const std::string& path);

/// Blank-line format: documents are separated by empty lines and numbered from 1.
std::vector<RawDocument> read_blank_separated_documents(const std::string& path);

std::vector<RawDocument> read_documents(const std::string& path, Boundaries boundaries);

/// Calls on_line(json, line_no) for each non-empty line of a JSONL file.
void for_each_jsonl(const std::string& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& on_line);

/// Id under which external counts are looked up: "<doc_id>:<index>" for the
/// source side and "<doc_id>:<index>:tgt" for the target side.
std::string sentence_id(const std::string& doc_id, std::size_t index, bool target);

/// Pairs two marker (or blank-line) files sentence by sentence and measures
/// each side with its scheme. Throws FormatError when documents disagree.
std::vector<DocumentPair> load_parallel_text(const std::string& src_path,
                                             const std::string& tgt_path, Boundaries boundaries,
                                             const LengthScheme& src_scheme,
                                             const LengthScheme& tgt_scheme);

/// JSONL alternative: {"doc_id": ..., "src": [...], "tgt": [...]} per line.
std::vector<DocumentPair> load_parallel_jsonl(const std::string& path,
                                              const LengthScheme& src_scheme,
                                              const LengthScheme& tgt_scheme);

/// Strings of a JSON field that may be a single string or an array of strings.
std::vector<std::string> string_list(const nlohmann::json& value, const std::string& path,
                                     std::size_t line_no, const char* field);

/// Full-precision, locale-independent number text (shortest round-trip form).
std::string number_text(double value);

/// Files staged in memory and written into a directory only when commit()
/// succeeds: each goes to a temporary name first and is then renamed, so a
/// failed command leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content);
  void commit();

  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace doceval
