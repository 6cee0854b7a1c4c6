#include "topicstab/lda.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

#include "topicstab/error.hpp"
#include "topicstab/random.hpp"

namespace topicstab {

ModelConfig ModelConfig::defaults_for(int num_topics, std::uint64_t seed) {
  ModelConfig config;
  config.num_topics = num_topics;
  config.alpha = 50.0 / num_topics;
  config.beta = 0.01;
  config.iterations = 500;
  config.seed = seed;
  return config;
}

void ModelConfig::validate() const {
  if (num_topics < 2) throw InvalidArgument("K must be >= 2, got " + std::to_string(num_topics));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
}

CountState CountState::from_assignments(const Corpus& corpus, std::size_t num_topics,
                                        std::vector<std::uint32_t> assignments) {
  CountState s;
  s.num_topics = num_topics;
  s.vocab_size = corpus.vocabulary().size();
  s.doc_offsets.reserve(corpus.num_documents() + 1);
  s.doc_offsets.push_back(0);
  s.words.reserve(corpus.num_tokens());
  for (const auto& doc : corpus.documents()) {
    s.words.insert(s.words.end(), doc.tokens.begin(), doc.tokens.end());
    s.doc_offsets.push_back(s.words.size());
  }
  if (assignments.size() != s.words.size()) throw InvalidArgument("assignment count does not match token count");
  s.assignments = std::move(assignments);
  s.doc_topic.assign(s.num_documents() * num_topics, 0);
  s.topic_word.assign(num_topics * s.vocab_size, 0);
  s.topic_total.assign(num_topics, 0);
  for (std::size_t d = 0; d < s.num_documents(); ++d) {
    for (std::size_t i = s.doc_offsets[d]; i < s.doc_offsets[d + 1]; ++i) {
      const std::uint32_t k = s.assignments[i];
      if (k >= num_topics) throw InvalidArgument("topic assignment out of range");
      ++s.doc_topic[d * num_topics + k];
      ++s.topic_word[k * s.vocab_size + s.words[i]];
      ++s.topic_total[k];
    }
  }
  return s;
}

bool CountState::counts_consistent() const {
  const std::size_t n = num_tokens();
  const std::size_t K = num_topics;
  std::vector<std::uint32_t> dk(doc_topic.size(), 0), kw(topic_word.size(), 0), k_tot(K, 0);
  for (std::size_t d = 0; d < num_documents(); ++d) {
    for (std::size_t i = doc_offsets[d]; i < doc_offsets[d + 1]; ++i) {
      ++dk[d * K + assignments[i]];
      ++kw[assignments[i] * vocab_size + words[i]];
      ++k_tot[assignments[i]];
    }
  }
  auto total = [](const std::vector<std::uint32_t>& v) { return std::accumulate(v.begin(), v.end(), std::size_t{0}); };
  if (total(doc_topic) != n || total(topic_word) != n || total(topic_total) != n) return false;
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t row = 0;
    for (std::size_t w = 0; w < vocab_size; ++w) row += topic_word[k * vocab_size + w];
    if (row != topic_total[k]) return false;
  }
  return dk == doc_topic && kw == topic_word && k_tot == topic_total;
}

TopicModel::TopicModel(ModelConfig config, Vocabulary vocabulary, Matrix phi, std::string corpus_fingerprint,
                       double final_log_likelihood)
    : config_(config),
      vocabulary_(std::move(vocabulary)),
      phi_(std::move(phi)),
      corpus_fingerprint_(std::move(corpus_fingerprint)),
      final_log_likelihood_(final_log_likelihood) {
  if (phi_.rows() < 1) throw InvalidArgument("topic model has no topics");
  if (phi_.rows() != static_cast<std::size_t>(config_.num_topics)) {
    throw InvalidArgument("phi has " + std::to_string(phi_.rows()) + " rows but K = " + std::to_string(config_.num_topics));
  }
  if (phi_.cols() != vocabulary_.size()) {
    throw InvalidArgument("phi has " + std::to_string(phi_.cols()) + " columns but V = " + std::to_string(vocabulary_.size()));
  }
  for (std::size_t k = 0; k < phi_.rows(); ++k) {
    double sum = 0.0;
    for (double p : phi_.row(k)) {
      if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("phi row " + std::to_string(k) + " has an invalid entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw InvalidArgument("phi row " + std::to_string(k) + " sums to " + std::to_string(sum));
    }
  }
}

Matrix estimate_phi(const CountState& state, double beta) {
  const std::size_t K = state.num_topics, V = state.vocab_size;
  const double v_beta = static_cast<double>(V) * beta;
  Matrix phi(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(state.topic_total[k]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) phi(k, w) = (static_cast<double>(state.topic_word[k * V + w]) + beta) / denom;
  }
  return phi;
}

double log_likelihood(const CountState& state, double alpha, double beta) {
  const std::size_t K = state.num_topics, V = state.vocab_size;
  const double Kd = static_cast<double>(K), Vd = static_cast<double>(V);
  double ll = 0.0;

  const double word_norm = std::lgamma(Vd * beta) - Vd * std::lgamma(beta);
  for (std::size_t k = 0; k < K; ++k) {
    ll += word_norm;
    for (std::size_t w = 0; w < V; ++w) ll += std::lgamma(static_cast<double>(state.topic_word[k * V + w]) + beta);
    ll -= std::lgamma(static_cast<double>(state.topic_total[k]) + Vd * beta);
  }

  const double doc_norm = std::lgamma(Kd * alpha) - Kd * std::lgamma(alpha);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    const double n_d = static_cast<double>(state.doc_offsets[d + 1] - state.doc_offsets[d]);
    ll += doc_norm;
    for (std::size_t k = 0; k < K; ++k) ll += std::lgamma(static_cast<double>(state.doc_topic[d * K + k]) + alpha);
    ll -= std::lgamma(n_d + Kd * alpha);
  }
  return ll;
}

TrainResult train_with_state(const Corpus& corpus, const ModelConfig& config, const SweepObserver& observer) {
  config.validate();
  const std::size_t K = static_cast<std::size_t>(config.num_topics);
  if (K > corpus.num_tokens()) {
    throw InvalidArgument("K = " + std::to_string(K) + " exceeds the corpus token count " +
                          std::to_string(corpus.num_tokens()));
  }

  Rng rng(config.seed);
  std::vector<std::uint32_t> init(corpus.num_tokens());
  for (auto& z : init) z = static_cast<std::uint32_t>(rng.below(K));
  CountState s = CountState::from_assignments(corpus, K, std::move(init));

  const std::size_t V = s.vocab_size;
  const double alpha = config.alpha, beta = config.beta;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);

  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    for (std::size_t d = 0; d < s.num_documents(); ++d) {
      std::uint32_t* n_dk = &s.doc_topic[d * K];
      for (std::size_t i = s.doc_offsets[d]; i < s.doc_offsets[d + 1]; ++i) {
        const WordId w = s.words[i];
        const std::uint32_t old_k = s.assignments[i];
        --n_dk[old_k];
        --s.topic_word[old_k * V + w];
        --s.topic_total[old_k];

        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (n_dk[k] + alpha) * (s.topic_word[k * V + w] + beta) / (s.topic_total[k] + v_beta);
          cumulative[k] = total;
        }
        const double u = rng.uniform01() * total;
        std::size_t new_k = 0;
        while (new_k + 1 < K && cumulative[new_k] <= u) ++new_k;

        s.assignments[i] = static_cast<std::uint32_t>(new_k);
        ++n_dk[new_k];
        ++s.topic_word[new_k * V + w];
        ++s.topic_total[new_k];
      }
    }
    assert(std::accumulate(s.topic_total.begin(), s.topic_total.end(), std::size_t{0}) == s.num_tokens());
    if (observer) observer(sweep, s);
  }

  const double ll = log_likelihood(s, alpha, beta);
  TopicModel model(config, corpus.vocabulary(), estimate_phi(s, beta), corpus.fingerprint(), ll);
  return {std::move(model), std::move(s)};
}

}  // namespace topicstab
