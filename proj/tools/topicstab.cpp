// Command-line front end: corpus building and sampling, training, alignment,
// full stability experiments, synthetic corpora and report rendering.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "topicstab/align.hpp"
#include "topicstab/corpus.hpp"
#include "topicstab/error.hpp"
#include "topicstab/experiment.hpp"
#include "topicstab/lda.hpp"
#include "topicstab/report.hpp"

namespace fs = std::filesystem;
using namespace topicstab;

namespace {

void write_alignment_json(const AlignmentResult& result, const fs::path& path) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : result.pairs) {
    pairs.push_back({{"source", p.source_topic}, {"target", p.target_topic}, {"distance", p.distance}});
  }
  nlohmann::json out = {{"k1", result.k1},
                        {"k2", result.k2},
                        {"union_vocab_size", result.union_vocab_size},
                        {"alignment_distance", result.alignment_distance},
                        {"topic_overlap", result.topic_overlap},
                        {"pairs", pairs}};
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << out.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic-model sampling stability toolkit"};
  app.require_subcommand(1);

  // corpus build / sample
  auto* corpus_cmd = app.add_subcommand("corpus", "Build or sample id-encoded corpora");
  corpus_cmd->require_subcommand(1);

  std::string build_input, build_output, stoplist_path;
  TokenizerConfig tok;
  auto* build = corpus_cmd->add_subcommand("build", "Tokenize a text directory or JSON-lines file");
  build->add_option("--input", build_input, "Directory of .txt files or JSON-lines {id,text}")->required();
  build->add_option("--output", build_output, "Corpus file to write")->required();
  build->add_option("--min-token-len", tok.min_token_length, "Minimum token length")->capture_default_str();
  build->add_option("--min-freq", tok.min_corpus_frequency, "Minimum corpus frequency")->capture_default_str();
  build->add_option("--stoplist", stoplist_path, "Whitespace-separated stopword file");

  std::string sample_input, sample_output;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  auto* sample = corpus_cmd->add_subcommand("sample", "Draw a seeded document sample");
  sample->add_option("--input", sample_input, "Corpus file")->required();
  sample->add_option("--n", sample_n, "Number of documents")->required();
  sample->add_option("--seed", sample_seed, "Sampling seed")->required();
  sample->add_option("--output", sample_output, "Corpus file to write")->required();

  // train
  std::string train_corpus, train_output;
  int train_k = 0;
  std::uint64_t train_seed = 0;
  std::optional<double> train_alpha;
  double train_beta = 0.01;
  int train_iters = 500;
  auto* train_cmd = app.add_subcommand("train", "Train an LDA model by collapsed Gibbs sampling");
  train_cmd->add_option("--corpus", train_corpus, "Corpus file")->required();
  train_cmd->add_option("--k", train_k, "Number of topics")->required();
  train_cmd->add_option("--seed", train_seed, "PRNG seed")->required();
  train_cmd->add_option("--alpha", train_alpha, "Document-topic prior (default 50/K)");
  train_cmd->add_option("--beta", train_beta, "Topic-word prior")->capture_default_str();
  train_cmd->add_option("--iters", train_iters, "Gibbs sweeps")->capture_default_str();
  train_cmd->add_option("--output", train_output, "Model file to write")->required();

  // align
  std::string m1_path, m2_path, align_output;
  bool divergence = false;
  auto* align_cmd = app.add_subcommand("align", "Align the topics of two models");
  align_cmd->add_option("--m1", m1_path, "Source model")->required();
  align_cmd->add_option("--m2", m2_path, "Target model")->required();
  align_cmd->add_flag("--divergence", divergence, "Use the raw JS divergence instead of the distance");
  align_cmd->add_option("--output", align_output, "Alignment JSON to write")->required();

  // experiment run / synth
  auto* exp_cmd = app.add_subcommand("experiment", "Run stability experiments");
  exp_cmd->require_subcommand(1);
  std::string exp_corpus, exp_plan, exp_outdir;
  unsigned threads = 1;
  auto* run = exp_cmd->add_subcommand("run", "Train spanning and sample models and measure them");
  run->add_option("--corpus", exp_corpus, "Corpus file")->required();
  run->add_option("--plan", exp_plan, "Plan JSON")->required();
  run->add_option("--outdir", exp_outdir, "Output directory")->required();
  run->add_option("--threads", threads, "Concurrent training runs")->capture_default_str();

  SyntheticParams synth_params;
  std::string synth_outdir;
  auto* synth = exp_cmd->add_subcommand("synth", "Generate a synthetic LDA corpus with known topics");
  synth->add_option("--k-true", synth_params.k_true, "Number of generating topics")->required();
  synth->add_option("--vocab", synth_params.vocab_size, "Vocabulary size")->required();
  synth->add_option("--docs", synth_params.num_documents, "Number of documents")->required();
  synth->add_option("--doclen", synth_params.doc_length, "Tokens per document")->required();
  synth->add_option("--alpha", synth_params.alpha_true, "Document-topic concentration")->required();
  synth->add_option("--beta-conc", synth_params.beta_concentration, "Topic-word concentration")->required();
  synth->add_option("--seed", synth_params.seed, "Generator seed")->required();
  synth->add_option("--outdir", synth_outdir, "Output directory")->required();

  // report
  std::string report_in, report_outdir;
  bool linear_x = false;
  auto* report_cmd = app.add_subcommand("report", "Render CSV tables and SVG charts from report.json");
  report_cmd->add_option("--in", report_in, "report.json from 'experiment run'")->required();
  report_cmd->add_option("--outdir", report_outdir, "Output directory")->required();
  report_cmd->add_flag("--linear-x", linear_x, "Linear instead of log2 sample-size axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      if (!stoplist_path.empty()) tok.stoplist = read_stoplist(stoplist_path);
      BuildDiagnostics diag;
      const Corpus corpus = build_corpus(read_raw_documents(build_input), tok, &diag);
      save_corpus(corpus, build_output);
      std::cerr << "built corpus: D=" << corpus.num_documents() << " V=" << corpus.vocabulary().size()
                << " tokens=" << corpus.num_tokens() << " dropped_documents=" << diag.dropped_empty_documents
                << " dropped_word_types=" << diag.dropped_word_types << " fingerprint=" << corpus.fingerprint() << '\n';
    } else if (sample->parsed()) {
      const Corpus sampled = sample_corpus(load_corpus(sample_input), sample_n, sample_seed);
      save_corpus(sampled, sample_output);
      std::cerr << "sampled corpus: D=" << sampled.num_documents() << " V=" << sampled.vocabulary().size() << '\n';
    } else if (train_cmd->parsed()) {
      const Corpus corpus = load_corpus(train_corpus);
      ModelConfig config = ModelConfig::defaults_for(train_k, train_seed);
      if (train_alpha) config.alpha = *train_alpha;
      config.beta = train_beta;
      config.iterations = train_iters;
      const TopicModel model = train(corpus, config);
      save_model(model, train_output);
      std::cerr << "trained K=" << train_k << " log_likelihood=" << model.final_log_likelihood() << '\n';
    } else if (align_cmd->parsed()) {
      const AlignmentResult result = align(load_model(m1_path), load_model(m2_path),
                                           divergence ? DistanceMeasure::kDivergence : DistanceMeasure::kDistance);
      write_alignment_json(result, align_output);
      std::cout << "alignment_distance=" << format_number(result.alignment_distance)
                << " topic_overlap=" << format_number(result.topic_overlap) << '\n';
    } else if (run->parsed()) {
      const Corpus corpus = load_corpus(exp_corpus);
      const ExperimentPlan plan = load_plan(exp_plan);
      const fs::path outdir = exp_outdir;
      fs::create_directories(outdir / "models");
      ExecutionOptions exec;
      exec.threads = threads;
      exec.model_sink = [&](const std::string& name, const TopicModel& m) {
        save_model(m, outdir / "models" / (name + ".model"));
      };
      const StabilityReport report = run_experiment(corpus, plan, exec);
      std::ofstream(outdir / "metrics.csv", std::ios::binary) << render_metrics_csv(report);
      save_report(report, outdir / "report.json");
      for (const auto& s : report.per_k) {
        std::cout << "k=" << s.k << " band_mean=" << format_number(s.band.mean) << " band_sd=" << format_number(s.band.sd)
                  << " minimum_stable_size="
                  << (s.minimum_stable_size ? std::to_string(*s.minimum_stable_size) : std::string("none")) << '\n';
      }
    } else if (synth->parsed()) {
      const SyntheticCorpus synthetic = generate_synthetic_corpus(synth_params);
      fs::create_directories(synth_outdir);
      save_corpus(synthetic.corpus, fs::path(synth_outdir) / "corpus.jsonl");
      save_model(synthetic.true_topics, fs::path(synth_outdir) / "true_phi.model");
      std::cerr << "synthetic corpus: D=" << synthetic.corpus.num_documents()
                << " V=" << synthetic.corpus.vocabulary().size() << '\n';
    } else if (report_cmd->parsed()) {
      const StabilityReport report = load_report(report_in);
      ChartOptions options;
      options.log2_x = !linear_x;
      emit_csv(report, report_outdir);
      emit_charts(report, report_outdir, options);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
