#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topicstab/corpus.hpp"
#include "topicstab/lda.hpp"
#include "topicstab/random.hpp"

namespace topicstab::testing {

/// 50 documents drawn only from {a,b,c} and 50 only from {x,y,z}, 100 tokens each.
inline Corpus separable_corpus(std::uint64_t seed = 2016) {
  const std::vector<std::string> first{"a", "b", "c"}, second{"x", "y", "z"};
  Rng rng(seed);
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  for (int d = 0; d < 100; ++d) {
    const auto& words = d < 50 ? first : second;
    std::vector<std::string> tokens;
    for (int i = 0; i < 100; ++i) tokens.push_back(words[rng.below(3)]);
    docs.emplace_back("doc" + std::to_string(d), std::move(tokens));
  }
  return build_corpus_from_tokens(docs, 1);
}

inline ModelConfig separable_config(std::uint64_t seed = 1) {
  ModelConfig config;
  config.num_topics = 2;
  config.alpha = 25.0;
  config.beta = 0.01;
  config.iterations = 200;
  config.seed = seed;
  return config;
}

/// Mass a topic row places on a set of words.
inline double mass_on(const TopicModel& model, std::size_t topic, const std::vector<std::string>& words) {
  double mass = 0.0;
  for (const auto& w : words) {
    if (auto id = model.vocabulary().find(w)) mass += model.phi()(topic, *id);
  }
  return mass;
}

}  // namespace topicstab::testing
