#include "topicstab/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <memory>
#include <numeric>
#include <unordered_set>

#include "topicstab/error.hpp"
#include "topicstab/random.hpp"

namespace topicstab {

Vocabulary::Vocabulary(std::vector<std::string> words) {
  index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!index_.emplace(words[i], static_cast<WordId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary word '" + words[i] + "'");
    }
  }
  words_ = std::move(words);
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::add(const std::string& word) {
  auto [it, inserted] = index_.emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

void TokenizerConfig::validate() const {
  if (min_token_length < 1) throw InvalidArgument("min_token_length must be >= 1");
  if (min_corpus_frequency < 1) throw InvalidArgument("min_corpus_frequency must be >= 1");
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }

  void update(const void* data, std::size_t len) { EVP_DigestUpdate(ctx_.get(), data, len); }

  void update_u64(std::uint64_t v) {
    std::array<unsigned char, 8> bytes;
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    update(bytes.data(), bytes.size());
  }

  void update_string(const std::string& s) {
    update_u64(s.size());
    update(s.data(), s.size());
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

// Little-endian, length-prefixed serialization of vocabulary then documents.
std::string fingerprint_of(const Vocabulary& vocabulary, const std::vector<Document>& documents) {
  Sha256 sha;
  sha.update_string("topicstab-corpus/v1");
  sha.update_u64(vocabulary.size());
  for (const auto& w : vocabulary.words()) sha.update_string(w);
  sha.update_u64(documents.size());
  for (const auto& doc : documents) {
    sha.update_string(doc.id);
    sha.update_u64(doc.tokens.size());
    for (WordId t : doc.tokens) sha.update_u64(t);
  }
  return sha.hex();
}

bool is_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char to_lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

}  // namespace

Corpus::Corpus(Vocabulary vocabulary, std::vector<Document> documents, int min_corpus_frequency)
    : vocabulary_(std::move(vocabulary)),
      documents_(std::move(documents)),
      min_corpus_frequency_(min_corpus_frequency) {
  if (min_corpus_frequency_ < 1) throw InvalidArgument("min_corpus_frequency must be >= 1");
  if (documents_.empty()) throw InvalidArgument("corpus has no documents");
  std::unordered_set<std::string> seen;
  const auto v = vocabulary_.size();
  for (const auto& doc : documents_) {
    if (!seen.insert(doc.id).second) throw InvalidArgument("duplicate doc_id '" + doc.id + "'");
    if (doc.tokens.empty()) throw InvalidArgument("document '" + doc.id + "' is empty");
    for (WordId t : doc.tokens) {
      if (t >= v) throw InvalidArgument("document '" + doc.id + "' has token id out of range");
    }
    num_tokens_ += doc.tokens.size();
  }
  fingerprint_ = fingerprint_of(vocabulary_, documents_);
}

std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerConfig& config) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (static_cast<int>(current.size()) >= config.min_token_length && !config.stoplist.contains(current)) {
      out.push_back(current);
    }
    current.clear();
  };
  for (unsigned char c : raw_text) {
    if (is_alpha(c)) {
      current.push_back(to_lower(c));
    } else if (!current.empty()) {
      flush();
    }
  }
  if (!current.empty()) flush();
  return out;
}

Corpus build_corpus_from_tokens(const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
                                int min_corpus_frequency, BuildDiagnostics* diagnostics) {
  if (min_corpus_frequency < 1) throw InvalidArgument("min_corpus_frequency must be >= 1");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& [id, tokens] : docs) {
      if (!ids.insert(id).second) throw InvalidArgument("duplicate doc_id '" + id + "'");
    }
  }

  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& [id, tokens] : docs) {
    for (const auto& t : tokens) ++counts[t];
  }

  Vocabulary vocabulary;
  std::vector<Document> documents;
  documents.reserve(docs.size());
  std::size_t dropped_docs = 0;
  for (const auto& [id, tokens] : docs) {
    Document doc{id, {}};
    doc.tokens.reserve(tokens.size());
    for (const auto& t : tokens) {
      if (counts.at(t) >= static_cast<std::size_t>(min_corpus_frequency)) doc.tokens.push_back(vocabulary.add(t));
    }
    if (doc.tokens.empty()) {
      ++dropped_docs;
    } else {
      documents.push_back(std::move(doc));
    }
  }
  if (documents.empty()) throw InvalidArgument("no documents survive filtering");

  if (diagnostics) {
    diagnostics->input_documents = docs.size();
    diagnostics->dropped_empty_documents = dropped_docs;
    diagnostics->dropped_word_types = counts.size() - vocabulary.size();
  }
  return Corpus(std::move(vocabulary), std::move(documents), min_corpus_frequency);
}

Corpus build_corpus(const std::vector<RawDocument>& raw_docs, const TokenizerConfig& config,
                    BuildDiagnostics* diagnostics) {
  config.validate();
  std::vector<std::pair<std::string, std::vector<std::string>>> tokenized;
  tokenized.reserve(raw_docs.size());
  for (const auto& raw : raw_docs) tokenized.emplace_back(raw.id, tokenize(raw.text, config));
  return build_corpus_from_tokens(tokenized, config.min_corpus_frequency, diagnostics);
}

Corpus sample_corpus(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  const std::size_t total = corpus.num_documents();
  if (n < 1 || n > total) {
    throw InvalidArgument("sample size " + std::to_string(n) + " out of range [1, " + std::to_string(total) + "]");
  }
  // Partial Fisher-Yates over document indices.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());

  const auto& vocab = corpus.vocabulary();
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  docs.reserve(n);
  for (std::size_t idx : order) {
    const auto& src = corpus.documents()[idx];
    std::vector<std::string> words;
    words.reserve(src.tokens.size());
    for (WordId t : src.tokens) words.push_back(vocab.word(t));
    docs.emplace_back(src.id, std::move(words));
  }
  return build_corpus_from_tokens(docs, corpus.min_corpus_frequency());
}

}  // namespace topicstab
