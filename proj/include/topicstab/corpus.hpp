#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace topicstab {

using WordId = std::uint32_t;

/// Dense word <-> id mapping; ids are exactly 0..size()-1.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws InvalidArgument on duplicate words.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<WordId> find(std::string_view word) const;

  /// Appends if absent; returns the word's id either way.
  WordId add(const std::string& word);

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

struct Document {
  std::string id;
  std::vector<WordId> tokens;

  bool operator==(const Document&) const = default;
};

struct TokenizerConfig {
  int min_token_length = 2;
  int min_corpus_frequency = 2;
  std::set<std::string> stoplist;

  void validate() const;
};

/// Counters reported by build_corpus; not part of corpus identity.
struct BuildDiagnostics {
  std::size_t input_documents = 0;
  std::size_t dropped_empty_documents = 0;
  std::size_t dropped_word_types = 0;
};

/// Immutable id-encoded corpus. Construct through build_corpus, sample_corpus
/// or load_corpus; the fingerprint is computed on construction.
class Corpus {
 public:
  /// Validates ids and token ranges, computes the fingerprint.
  Corpus(Vocabulary vocabulary, std::vector<Document> documents, int min_corpus_frequency);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t num_documents() const { return documents_.size(); }
  std::size_t num_tokens() const { return num_tokens_; }
  const std::string& fingerprint() const { return fingerprint_; }
  /// Frequency floor re-applied when samples rebuild their vocabulary.
  int min_corpus_frequency() const { return min_corpus_frequency_; }

 private:
  Vocabulary vocabulary_;
  std::vector<Document> documents_;
  int min_corpus_frequency_;
  std::size_t num_tokens_ = 0;
  std::string fingerprint_;
};

/// Lowercase, split on every non-ASCII-alphabetic byte, drop short and stoplisted tokens.
std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerConfig& config);

struct RawDocument {
  std::string id;
  std::string text;
};

Corpus build_corpus(const std::vector<RawDocument>& raw_docs, const TokenizerConfig& config,
                    BuildDiagnostics* diagnostics = nullptr);

/// Corpus over pre-tokenized documents: drops word types below min_corpus_frequency,
/// assigns ids in first-occurrence order, drops documents left empty.
Corpus build_corpus_from_tokens(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                                int min_corpus_frequency, BuildDiagnostics* diagnostics = nullptr);

/// n documents drawn uniformly without replacement (kept in source order), with the
/// vocabulary rebuilt from the selection only.
Corpus sample_corpus(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// Plain-text inputs: every regular file in a directory (sorted by name, doc_id = file
/// name) or a JSON-lines file of {"id", "text"} objects.
std::vector<RawDocument> read_raw_documents(const std::filesystem::path& input);

std::set<std::string> read_stoplist(const std::filesystem::path& path);

inline constexpr int kCorpusFormatVersion = 1;

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace topicstab
