#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "json_fields.hpp"
#include "topicstab/corpus.hpp"
#include "topicstab/error.hpp"

namespace topicstab {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::require_field;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<RawDocument> read_raw_documents(const fs::path& input) {
  std::vector<RawDocument> docs;
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.push_back({f.filename().string(), read_file(f)});
    return docs;
  }
  std::ifstream in(input);
  if (!in) throw IoError("cannot open '" + input.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string context = input.string() + ":" + std::to_string(line_no);
    auto obj = detail::parse_json_line(line, context);
    docs.push_back({require_field<std::string>(obj, "id", context), require_field<std::string>(obj, "text", context)});
  }
  return docs;
}

std::set<std::string> read_stoplist(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stoplist '" + path.string() + "'");
  std::set<std::string> words;
  std::string w;
  while (in >> w) {
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.insert(w);
  }
  return words;
}

void save_corpus(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  json header = {
      {"format", "topicstab-corpus"},
      {"version", kCorpusFormatVersion},
      {"V", corpus.vocabulary().size()},
      {"D", corpus.num_documents()},
      {"fingerprint", corpus.fingerprint()},
      {"min_corpus_frequency", corpus.min_corpus_frequency()},
      {"vocabulary", corpus.vocabulary().words()},
  };
  out << header.dump() << '\n';
  for (const auto& doc : corpus.documents()) {
    out << json{{"id", doc.id}, {"tokens", doc.tokens}}.dump() << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Corpus load_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string context = "corpus file '" + path.string() + "'";
  std::string line;
  if (!std::getline(in, line)) throw FormatError(context + ": empty file");
  const json header = detail::parse_json_line(line, context + " header");

  const auto version = require_field<int>(header, "version", context);
  if (version != kCorpusFormatVersion) {
    throw FormatError(context + ": field 'version' is " + std::to_string(version) + ", expected " +
                      std::to_string(kCorpusFormatVersion));
  }
  const auto v = require_field<std::size_t>(header, "V", context);
  const auto d = require_field<std::size_t>(header, "D", context);
  const auto fingerprint = require_field<std::string>(header, "fingerprint", context);
  const auto min_freq = require_field<int>(header, "min_corpus_frequency", context);
  auto words = require_field<std::vector<std::string>>(header, "vocabulary", context);
  if (words.size() != v) throw FormatError(context + ": field 'vocabulary' has " + std::to_string(words.size()) + " entries, 'V' says " + std::to_string(v));

  std::vector<Document> documents;
  documents.reserve(d);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string doc_context = context + " line " + std::to_string(line_no);
    const json obj = detail::parse_json_line(line, doc_context);
    documents.push_back({require_field<std::string>(obj, "id", doc_context),
                         require_field<std::vector<WordId>>(obj, "tokens", doc_context)});
  }
  if (documents.size() != d) {
    throw FormatError(context + ": truncated, field 'D' says " + std::to_string(d) + " documents, found " +
                      std::to_string(documents.size()));
  }
  try {
    Corpus corpus(Vocabulary(std::move(words)), std::move(documents), min_freq);
    if (corpus.fingerprint() != fingerprint) throw FormatError(context + ": field 'fingerprint' does not match content");
    return corpus;
  } catch (const InvalidArgument& e) {
    throw FormatError(context + ": " + e.what());
  }
}

}  // namespace topicstab
