#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "topicstab/corpus.hpp"
#include "topicstab/matrix.hpp"

namespace topicstab {

struct ModelConfig {
  int num_topics = 20;
  double alpha = 2.5;
  double beta = 0.01;
  int iterations = 500;
  std::uint64_t seed = 0;

  /// alpha = 50/K, beta = 0.01, 500 sweeps.
  static ModelConfig defaults_for(int num_topics, std::uint64_t seed);

  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

/// Collapsed Gibbs sufficient statistics. Tokens are laid out in document order,
/// then position; doc_offsets[d]..doc_offsets[d+1] indexes document d.
struct CountState {
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::size_t> doc_offsets;
  std::vector<WordId> words;
  std::vector<std::uint32_t> assignments;
  std::vector<std::uint32_t> doc_topic;    // D x K
  std::vector<std::uint32_t> topic_word;   // K x V
  std::vector<std::uint32_t> topic_total;  // K

  std::size_t num_documents() const { return doc_offsets.empty() ? 0 : doc_offsets.size() - 1; }
  std::size_t num_tokens() const { return words.size(); }

  /// Rebuilds every count table from corpus tokens and the given assignments.
  static CountState from_assignments(const Corpus& corpus, std::size_t num_topics,
                                     std::vector<std::uint32_t> assignments);

  /// True when all three count tables are consistent with the assignments.
  bool counts_consistent() const;
};

class TopicModel {
 public:
  /// Rejects shape mismatches, negative or non-finite entries, and rows whose sum
  /// is off by more than 1e-6.
  TopicModel(ModelConfig config, Vocabulary vocabulary, Matrix phi, std::string corpus_fingerprint,
             double final_log_likelihood);

  const ModelConfig& config() const { return config_; }
  std::size_t num_topics() const { return phi_.rows(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const Matrix& phi() const { return phi_; }
  const std::string& corpus_fingerprint() const { return corpus_fingerprint_; }
  double final_log_likelihood() const { return final_log_likelihood_; }

  bool operator==(const TopicModel&) const = default;

 private:
  ModelConfig config_;
  Vocabulary vocabulary_;
  Matrix phi_;
  std::string corpus_fingerprint_;
  double final_log_likelihood_;
};

/// Called after every completed sweep (1-based) with the live state.
using SweepObserver = std::function<void(int sweep, const CountState& state)>;

struct TrainResult {
  TopicModel model;
  CountState state;
};

/// Sequential collapsed Gibbs sampler; bitwise deterministic for fixed (corpus, config).
TrainResult train_with_state(const Corpus& corpus, const ModelConfig& config, const SweepObserver& observer = {});

inline TopicModel train(const Corpus& corpus, const ModelConfig& config, const SweepObserver& observer = {}) {
  return train_with_state(corpus, config, observer).model;
}

/// log p(w, z) in nats with the Dirichlet normalisers included:
///   sum_k [lnG(V b) - V lnG(b) + sum_w lnG(n_kw + b) - lnG(n_k + V b)]
/// + sum_d [lnG(K a) - K lnG(a) + sum_k lnG(n_dk + a) - lnG(n_d + K a)]
double log_likelihood(const CountState& state, double alpha, double beta);

/// phi[k][w] = (n_kw + beta) / (n_k + V beta)
Matrix estimate_phi(const CountState& state, double beta);

inline constexpr int kModelFormatVersion = 1;

void save_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_model(const std::filesystem::path& path);

}  // namespace topicstab
