#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topicstab/align.hpp"
#include "topicstab/corpus.hpp"
#include "topicstab/lda.hpp"

namespace topicstab {

/// Trainer settings shared by every run of a plan; K and seed are filled per run.
struct TrainerTemplate {
  std::optional<double> alpha;  // unset: 50 / K
  double beta = 0.01;
  int iterations = 500;

  ModelConfig config_for(int k, std::uint64_t seed) const;
};

struct ExperimentPlan {
  std::vector<int> k_values{20, 40, 60, 80};
  int spanning_count = 5;
  std::vector<std::size_t> sample_sizes;
  int replicates_per_size = 5;
  std::uint64_t base_seed = 0;
  TrainerTemplate trainer;
  /// Stability threshold is band.mean + band_sd_multiplier * band.sd.
  double band_sd_multiplier = 1.0;
  /// Overrides the derived spanning seeds when non-empty; size must equal spanning_count.
  std::vector<std::uint64_t> spanning_seeds;

  /// Throws InvalidArgument. Checks counts, ascending sizes within [1, corpus_documents],
  /// and that every derived run seed in the plan is distinct.
  void validate(std::size_t corpus_documents) const;

  std::uint64_t spanning_seed(int k, int index) const;
  std::uint64_t sample_draw_seed(int k, std::size_t size, int replicate) const;
  std::uint64_t sample_train_seed(int k, std::size_t size, int replicate) const;
};

ExperimentPlan load_plan(const std::filesystem::path& path);
void save_plan(const ExperimentPlan& plan, const std::filesystem::path& path);

enum class ComparisonKind { kSpanningVsSpanning, kSampleVsSpanning };

const char* to_string(ComparisonKind kind);
ComparisonKind comparison_kind_from_string(const std::string& text);

struct MetricsRow {
  int k = 0;
  ComparisonKind kind = ComparisonKind::kSpanningVsSpanning;
  std::optional<std::size_t> sample_size;  // present iff kind is sample-vs-spanning
  std::uint64_t source_seed = 0;
  std::uint64_t target_seed = 0;
  double alignment_distance = 0.0;
  double topic_overlap = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

struct SpanningBand {
  int k = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

struct SizeStats {
  std::size_t sample_size = 0;
  std::size_t comparisons = 0;
  double mean_distance = 0.0;
  double sd_distance = 0.0;
  double mean_overlap = 0.0;
  double sd_overlap = 0.0;
};

struct TopicCountStability {
  int k = 0;
  SpanningBand band;
  std::vector<SizeStats> sizes;  // ascending sample size
  std::optional<std::size_t> minimum_stable_size;
};

struct StabilityReport {
  std::string corpus_fingerprint;
  ExperimentPlan plan;
  std::vector<MetricsRow> rows;  // canonical order
  std::vector<TopicCountStability> per_k;
};

void save_report(const StabilityReport& report, const std::filesystem::path& path);
StabilityReport load_report(const std::filesystem::path& path);

/// A training run inside an experiment failed; the message names the run's seed.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExecutionOptions {
  unsigned threads = 1;
  /// Receives every trained model with a stable name, e.g. for writing to disk.
  std::function<void(const std::string& name, const TopicModel& model)> model_sink;
};

struct SpanningRun {
  std::vector<TopicModel> models;
  std::vector<MetricsRow> rows;  // S * (S - 1) ordered pairs
};

SpanningRun run_spanning(const Corpus& corpus, int k, const ExperimentPlan& plan, const ExecutionOptions& exec = {});

/// Each sample model (source) aligned against every spanning model (target).
std::vector<MetricsRow> run_samples(const Corpus& corpus, int k, const ExperimentPlan& plan,
                                    std::span<const TopicModel> spanning_models, const ExecutionOptions& exec = {});

/// Throws InvalidArgument when fewer than two rows, or rows of another kind or k.
SpanningBand spanning_band(std::span<const MetricsRow> spanning_rows);

struct SizeMean {
  std::size_t sample_size;
  double mean_distance;
};

/// Smallest size whose mean distance <= band.mean + sd_multiplier * band.sd.
/// Throws InvalidArgument on empty or non-ascending input.
std::optional<std::size_t> min_stable_sample_size(std::span<const SizeMean> size_means, const SpanningBand& band,
                                                  double sd_multiplier = 1.0);

/// Per-size means and sds of both measures over the sample rows of one k.
std::vector<SizeStats> summarize_sizes(std::span<const MetricsRow> sample_rows);

StabilityReport run_experiment(const Corpus& corpus, const ExperimentPlan& plan, const ExecutionOptions& exec = {});

struct SyntheticParams {
  int k_true = 5;
  std::size_t vocab_size = 200;
  std::size_t num_documents = 2000;
  std::size_t doc_length = 100;
  double alpha_true = 0.1;
  double beta_concentration = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// Generating topics over the full vocabulary ("w000".."w199" style names).
  TopicModel true_topics;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticParams& params);

}  // namespace topicstab
