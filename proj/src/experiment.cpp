#include "topicstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "topicstab/error.hpp"
#include "topicstab/random.hpp"
#include "topicstab/stats.hpp"

namespace topicstab {

ModelConfig TrainerTemplate::config_for(int k, std::uint64_t seed) const {
  ModelConfig config = ModelConfig::defaults_for(k, seed);
  if (alpha) config.alpha = *alpha;
  config.beta = beta;
  config.iterations = iterations;
  return config;
}

std::uint64_t ExperimentPlan::spanning_seed(int k, int index) const {
  if (!spanning_seeds.empty()) return spanning_seeds.at(static_cast<std::size_t>(index));
  return derive_seed(base_seed, SeedRole::kSpanning, static_cast<std::uint64_t>(k), 0, static_cast<std::uint64_t>(index));
}

std::uint64_t ExperimentPlan::sample_draw_seed(int k, std::size_t size, int replicate) const {
  return derive_seed(base_seed, SeedRole::kSampleDraw, static_cast<std::uint64_t>(k), size,
                     static_cast<std::uint64_t>(replicate));
}

std::uint64_t ExperimentPlan::sample_train_seed(int k, std::size_t size, int replicate) const {
  return derive_seed(base_seed, SeedRole::kSampleTrain, static_cast<std::uint64_t>(k), size,
                     static_cast<std::uint64_t>(replicate));
}

void ExperimentPlan::validate(std::size_t corpus_documents) const {
  if (k_values.empty()) throw InvalidArgument("plan: k_values is empty");
  std::set<int> ks;
  for (int k : k_values) {
    if (k < 2) throw InvalidArgument("plan: every k must be >= 2, got " + std::to_string(k));
    if (!ks.insert(k).second) throw InvalidArgument("plan: duplicate k " + std::to_string(k));
  }
  if (spanning_count < 2) throw InvalidArgument("plan: spanning_count must be >= 2");
  if (replicates_per_size < 1) throw InvalidArgument("plan: replicates_per_size must be >= 1");
  if (!spanning_seeds.empty() && spanning_seeds.size() != static_cast<std::size_t>(spanning_count)) {
    throw InvalidArgument("plan: spanning_seeds has " + std::to_string(spanning_seeds.size()) +
                          " entries, spanning_count is " + std::to_string(spanning_count));
  }
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    const std::size_t n = sample_sizes[i];
    if (n < 1 || n > corpus_documents) {
      throw InvalidArgument("plan: sample size " + std::to_string(n) + " out of range [1, " +
                            std::to_string(corpus_documents) + "]");
    }
    if (i > 0 && n <= sample_sizes[i - 1]) throw InvalidArgument("plan: sample_sizes must be strictly ascending");
  }
  if (!(band_sd_multiplier >= 0.0)) throw InvalidArgument("plan: band_sd_multiplier must be >= 0");
  trainer.config_for(k_values.front(), 0).validate();

  // Training seeds must be distinct; sample-draw seeds live in their own role space.
  std::set<std::uint64_t> seeds;
  auto claim = [&seeds](std::uint64_t seed, const std::string& what) {
    if (!seeds.insert(seed).second) throw InvalidArgument("plan: derived seed " + std::to_string(seed) + " for " + what + " collides with another run");
  };
  for (int k : k_values) {
    for (int i = 0; i < spanning_count; ++i) {
      claim(spanning_seed(k, i), "spanning model " + std::to_string(i) + " (k=" + std::to_string(k) + ")");
    }
    for (std::size_t n : sample_sizes) {
      for (int r = 0; r < replicates_per_size; ++r) {
        claim(sample_train_seed(k, n, r), "sample model n=" + std::to_string(n) + " r=" + std::to_string(r) + " (k=" + std::to_string(k) + ")");
      }
    }
  }
}

const char* to_string(ComparisonKind kind) {
  return kind == ComparisonKind::kSpanningVsSpanning ? "spanning-vs-spanning" : "sample-vs-spanning";
}

ComparisonKind comparison_kind_from_string(const std::string& text) {
  if (text == "spanning-vs-spanning") return ComparisonKind::kSpanningVsSpanning;
  if (text == "sample-vs-spanning") return ComparisonKind::kSampleVsSpanning;
  throw InvalidArgument("unknown comparison kind '" + text + "'");
}

namespace {

// Runs task(i) for i in [0, n) on up to `threads` workers. After all workers finish,
// rethrows the exception of the lowest failing index, so errors do not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t n, unsigned threads, Task task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

TopicModel train_tagged(const Corpus& corpus, const ModelConfig& config, const std::string& role) {
  try {
    return train(corpus, config);
  } catch (const std::exception& e) {
    throw ExperimentError(role + " training run with seed " + std::to_string(config.seed) + " failed: " + e.what());
  }
}

}  // namespace

SpanningRun run_spanning(const Corpus& corpus, int k, const ExperimentPlan& plan, const ExecutionOptions& exec) {
  plan.validate(corpus.num_documents());
  const std::size_t S = static_cast<std::size_t>(plan.spanning_count);
  std::vector<std::optional<TopicModel>> trained(S);
  parallel_for(S, exec.threads, [&](std::size_t i) {
    trained[i] = train_tagged(corpus, plan.trainer.config_for(k, plan.spanning_seed(k, static_cast<int>(i))), "spanning");
  });

  SpanningRun run;
  run.models.reserve(S);
  for (auto& m : trained) run.models.push_back(std::move(*m));
  if (exec.model_sink) {
    for (std::size_t i = 0; i < S; ++i) exec.model_sink("k" + std::to_string(k) + "_spanning_" + std::to_string(i), run.models[i]);
  }

  std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs;
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t j = 0; j < S; ++j) {
      if (i != j) ordered_pairs.emplace_back(i, j);
    }
  }
  run.rows.resize(ordered_pairs.size());
  parallel_for(ordered_pairs.size(), exec.threads, [&](std::size_t p) {
    const auto [i, j] = ordered_pairs[p];
    const AlignmentResult result = align(run.models[i], run.models[j]);
    run.rows[p] = MetricsRow{k, ComparisonKind::kSpanningVsSpanning, std::nullopt, run.models[i].config().seed,
                             run.models[j].config().seed, result.alignment_distance, result.topic_overlap};
  });
  return run;
}

std::vector<MetricsRow> run_samples(const Corpus& corpus, int k, const ExperimentPlan& plan,
                                    std::span<const TopicModel> spanning_models, const ExecutionOptions& exec) {
  plan.validate(corpus.num_documents());
  for (const auto& m : spanning_models) {
    if (m.corpus_fingerprint() != corpus.fingerprint()) {
      throw InvalidArgument("spanning model with seed " + std::to_string(m.config().seed) + " was trained on a different corpus");
    }
  }
  const std::size_t R = static_cast<std::size_t>(plan.replicates_per_size);
  const std::size_t S = spanning_models.size();
  const std::size_t tasks = plan.sample_sizes.size() * R;

  std::vector<std::optional<TopicModel>> sample_models(tasks);
  std::vector<MetricsRow> rows(tasks * S);
  parallel_for(tasks, exec.threads, [&](std::size_t t) {
    const std::size_t n = plan.sample_sizes[t / R];
    const int r = static_cast<int>(t % R);
    const Corpus sample = sample_corpus(corpus, n, plan.sample_draw_seed(k, n, r));
    TopicModel model = train_tagged(sample, plan.trainer.config_for(k, plan.sample_train_seed(k, n, r)), "sample");
    for (std::size_t s = 0; s < S; ++s) {
      const AlignmentResult result = align(model, spanning_models[s]);
      rows[t * S + s] = MetricsRow{k, ComparisonKind::kSampleVsSpanning, n, model.config().seed,
                                   spanning_models[s].config().seed, result.alignment_distance, result.topic_overlap};
    }
    sample_models[t] = std::move(model);
  });
  if (exec.model_sink) {
    for (std::size_t t = 0; t < tasks; ++t) {
      exec.model_sink("k" + std::to_string(k) + "_n" + std::to_string(plan.sample_sizes[t / R]) + "_r" + std::to_string(t % R),
                      *sample_models[t]);
    }
  }
  return rows;
}

SpanningBand spanning_band(std::span<const MetricsRow> spanning_rows) {
  if (spanning_rows.size() < 2) throw InvalidArgument("spanning band needs at least 2 rows, got " + std::to_string(spanning_rows.size()));
  SpanningBand band;
  band.k = spanning_rows.front().k;
  std::vector<double> distances;
  for (const auto& row : spanning_rows) {
    if (row.kind != ComparisonKind::kSpanningVsSpanning || row.k != band.k) {
      throw InvalidArgument("spanning band rows must all be spanning-vs-spanning with the same k");
    }
    distances.push_back(row.alignment_distance);
  }
  band.n = distances.size();
  band.mean = mean(distances);
  band.sd = sample_sd(distances);
  band.min = *std::min_element(distances.begin(), distances.end());
  band.max = *std::max_element(distances.begin(), distances.end());
  return band;
}

std::optional<std::size_t> min_stable_sample_size(std::span<const SizeMean> size_means, const SpanningBand& band,
                                                  double sd_multiplier) {
  if (size_means.empty()) throw InvalidArgument("min_stable_sample_size: no sample sizes");
  const double threshold = band.mean + sd_multiplier * band.sd;
  for (std::size_t i = 0; i < size_means.size(); ++i) {
    if (i > 0 && size_means[i].sample_size <= size_means[i - 1].sample_size) {
      throw InvalidArgument("min_stable_sample_size: sizes must be ascending");
    }
  }
  for (const auto& entry : size_means) {
    if (entry.mean_distance <= threshold) return entry.sample_size;
  }
  return std::nullopt;
}

std::vector<SizeStats> summarize_sizes(std::span<const MetricsRow> sample_rows) {
  std::vector<std::size_t> sizes;
  for (const auto& row : sample_rows) {
    if (row.kind != ComparisonKind::kSampleVsSpanning || !row.sample_size) {
      throw InvalidArgument("summarize_sizes expects sample-vs-spanning rows");
    }
    sizes.push_back(*row.sample_size);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<SizeStats> out;
  for (std::size_t n : sizes) {
    std::vector<double> distances, overlaps;
    for (const auto& row : sample_rows) {
      if (*row.sample_size == n) {
        distances.push_back(row.alignment_distance);
        overlaps.push_back(row.topic_overlap);
      }
    }
    out.push_back({n, distances.size(), mean(distances), sample_sd(distances), mean(overlaps), sample_sd(overlaps)});
  }
  return out;
}

StabilityReport run_experiment(const Corpus& corpus, const ExperimentPlan& plan, const ExecutionOptions& exec) {
  plan.validate(corpus.num_documents());
  StabilityReport report;
  report.corpus_fingerprint = corpus.fingerprint();
  report.plan = plan;
  for (int k : plan.k_values) {
    SpanningRun spanning = run_spanning(corpus, k, plan, exec);
    std::vector<MetricsRow> samples = run_samples(corpus, k, plan, spanning.models, exec);

    TopicCountStability stability;
    stability.k = k;
    stability.band = spanning_band(spanning.rows);
    if (!samples.empty()) {
      stability.sizes = summarize_sizes(samples);
      std::vector<SizeMean> means;
      for (const auto& s : stability.sizes) means.push_back({s.sample_size, s.mean_distance});
      stability.minimum_stable_size = min_stable_sample_size(means, stability.band, plan.band_sd_multiplier);
    }
    report.per_k.push_back(std::move(stability));
    report.rows.insert(report.rows.end(), spanning.rows.begin(), spanning.rows.end());
    report.rows.insert(report.rows.end(), samples.begin(), samples.end());
  }
  return report;
}

}  // namespace topicstab
