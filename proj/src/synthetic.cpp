#include <algorithm>
#include <cmath>
#include <cstdio>

#include "topicstab/error.hpp"
#include "topicstab/experiment.hpp"
#include "topicstab/random.hpp"

namespace topicstab {

void SyntheticParams::validate() const {
  if (k_true < 1) throw InvalidArgument("synthetic: k_true must be positive");
  if (vocab_size < 1) throw InvalidArgument("synthetic: vocabulary size must be positive");
  if (num_documents < 1) throw InvalidArgument("synthetic: document count must be positive");
  if (doc_length < 1) throw InvalidArgument("synthetic: document length must be positive");
  if (!(alpha_true > 0.0)) throw InvalidArgument("synthetic: alpha_true must be positive");
  if (!(beta_concentration > 0.0)) throw InvalidArgument("synthetic: beta_concentration must be positive");
  if (static_cast<std::size_t>(k_true) > vocab_size) throw InvalidArgument("synthetic: k_true must not exceed the vocabulary size");
}

namespace {

// Symmetric Dirichlet via normalised gammas; redraws the (vanishingly rare) all-underflow case.
std::vector<double> draw_dirichlet(Rng& rng, std::size_t dim, double concentration) {
  std::vector<double> out(dim);
  for (;;) {
    double sum = 0.0;
    for (auto& x : out) {
      x = rng.gamma(concentration);
      sum += x;
    }
    if (sum > 0.0) {
      for (auto& x : out) x /= sum;
      return out;
    }
  }
}

std::size_t draw_from_cdf(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = total += p[i];
  return cdf;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticParams& params) {
  params.validate();
  const std::size_t K = static_cast<std::size_t>(params.k_true);
  const std::size_t V = params.vocab_size;
  Rng rng(params.seed);

  std::vector<std::string> names(V);
  const int width = static_cast<int>(std::to_string(V - 1).size());
  for (std::size_t w = 0; w < V; ++w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%0*zu", width, w);
    names[w] = buf;
  }

  Matrix true_phi(K, V);
  std::vector<std::vector<double>> word_cdfs;
  for (std::size_t k = 0; k < K; ++k) {
    const auto row = draw_dirichlet(rng, V, params.beta_concentration);
    std::copy(row.begin(), row.end(), true_phi.row(k).begin());
    word_cdfs.push_back(cumulative(row));
  }

  const int id_width = static_cast<int>(std::to_string(params.num_documents - 1).size());
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  docs.reserve(params.num_documents);
  for (std::size_t d = 0; d < params.num_documents; ++d) {
    const auto topic_cdf = cumulative(draw_dirichlet(rng, K, params.alpha_true));
    std::vector<std::string> tokens;
    tokens.reserve(params.doc_length);
    for (std::size_t i = 0; i < params.doc_length; ++i) {
      const std::size_t k = draw_from_cdf(topic_cdf, rng.uniform01());
      tokens.push_back(names[draw_from_cdf(word_cdfs[k], rng.uniform01())]);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "doc%0*zu", id_width, d);
    docs.emplace_back(buf, std::move(tokens));
  }

  Corpus corpus = build_corpus_from_tokens(docs, 1);
  ModelConfig config;
  config.num_topics = params.k_true;
  config.alpha = params.alpha_true;
  config.beta = params.beta_concentration;
  config.iterations = 0;
  config.seed = params.seed;
  TopicModel truth(config, Vocabulary(std::move(names)), std::move(true_phi), corpus.fingerprint(), 0.0);
  return {std::move(corpus), std::move(truth)};
}

}  // namespace topicstab
