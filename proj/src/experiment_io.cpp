#include <fstream>
#include <json.hpp>
#include <sstream>

#include "json_fields.hpp"
#include "topicstab/error.hpp"
#include "topicstab/experiment.hpp"

namespace topicstab {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::require_field;

inline constexpr int kReportFormatVersion = 1;

namespace {

json plan_to_json(const ExperimentPlan& plan) {
  json trainer = {{"beta", plan.trainer.beta}, {"iterations", plan.trainer.iterations}};
  trainer["alpha"] = plan.trainer.alpha ? json(*plan.trainer.alpha) : json(nullptr);
  return {
      {"k_values", plan.k_values},
      {"spanning_count", plan.spanning_count},
      {"sample_sizes", plan.sample_sizes},
      {"replicates_per_size", plan.replicates_per_size},
      {"base_seed", plan.base_seed},
      {"trainer", trainer},
      {"band_sd_multiplier", plan.band_sd_multiplier},
      {"spanning_seeds", plan.spanning_seeds},
  };
}

template <typename T>
T optional_field(const json& object, const std::string& field, const T& fallback, const std::string& context) {
  if (!object.contains(field)) return fallback;
  return require_field<T>(object, field, context);
}

ExperimentPlan plan_from_json(const json& j, const std::string& context) {
  if (!j.is_object()) throw FormatError(context + ": plan must be a JSON object");
  ExperimentPlan plan;
  plan.k_values = optional_field(j, "k_values", plan.k_values, context);
  plan.spanning_count = optional_field(j, "spanning_count", plan.spanning_count, context);
  plan.sample_sizes = require_field<std::vector<std::size_t>>(j, "sample_sizes", context);
  plan.replicates_per_size = optional_field(j, "replicates_per_size", plan.replicates_per_size, context);
  plan.base_seed = require_field<std::uint64_t>(j, "base_seed", context);
  plan.band_sd_multiplier = optional_field(j, "band_sd_multiplier", plan.band_sd_multiplier, context);
  plan.spanning_seeds = optional_field(j, "spanning_seeds", plan.spanning_seeds, context);
  if (j.contains("trainer")) {
    const json& t = j.at("trainer");
    const std::string tctx = context + " trainer";
    if (t.contains("alpha") && !t.at("alpha").is_null()) plan.trainer.alpha = require_field<double>(t, "alpha", tctx);
    plan.trainer.beta = optional_field(t, "beta", plan.trainer.beta, tctx);
    plan.trainer.iterations = optional_field(t, "iterations", plan.trainer.iterations, tctx);
  }
  return plan;
}

json read_json_file(const fs::path& path, const std::string& context) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return detail::parse_json_line(buf.str(), context);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

ExperimentPlan load_plan(const fs::path& path) {
  const std::string context = "plan file '" + path.string() + "'";
  return plan_from_json(read_json_file(path, context), context);
}

void save_plan(const ExperimentPlan& plan, const fs::path& path) { write_text(path, plan_to_json(plan).dump(2) + "\n"); }

void save_report(const StabilityReport& report, const fs::path& path) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({
        {"k", r.k},
        {"comparison_kind", to_string(r.kind)},
        {"sample_size", r.sample_size ? json(*r.sample_size) : json(nullptr)},
        {"source_seed", r.source_seed},
        {"target_seed", r.target_seed},
        {"alignment_distance", r.alignment_distance},
        {"topic_overlap", r.topic_overlap},
    });
  }
  json per_k = json::array();
  for (const auto& s : report.per_k) {
    json sizes = json::array();
    for (const auto& z : s.sizes) {
      sizes.push_back({{"sample_size", z.sample_size},
                       {"comparisons", z.comparisons},
                       {"mean_distance", z.mean_distance},
                       {"sd_distance", z.sd_distance},
                       {"mean_overlap", z.mean_overlap},
                       {"sd_overlap", z.sd_overlap}});
    }
    per_k.push_back({
        {"k", s.k},
        {"band",
         {{"mean", s.band.mean}, {"sd", s.band.sd}, {"min", s.band.min}, {"max", s.band.max}, {"n", s.band.n}}},
        {"sizes", sizes},
        {"minimum_stable_size", s.minimum_stable_size ? json(*s.minimum_stable_size) : json(nullptr)},
    });
  }
  json out = {
      {"format", "topicstab-report"},
      {"version", kReportFormatVersion},
      {"corpus_fingerprint", report.corpus_fingerprint},
      {"plan", plan_to_json(report.plan)},
      {"rows", rows},
      {"per_k", per_k},
  };
  write_text(path, out.dump(2) + "\n");
}

StabilityReport load_report(const fs::path& path) {
  const std::string context = "report file '" + path.string() + "'";
  const json j = read_json_file(path, context);
  const auto version = require_field<int>(j, "version", context);
  if (version != kReportFormatVersion) throw FormatError(context + ": field 'version' is " + std::to_string(version));

  StabilityReport report;
  report.corpus_fingerprint = require_field<std::string>(j, "corpus_fingerprint", context);
  report.plan = plan_from_json(require_field<json>(j, "plan", context), context + " plan");
  for (const auto& r : require_field<json>(j, "rows", context)) {
    MetricsRow row;
    row.k = require_field<int>(r, "k", context + " row");
    try {
      row.kind = comparison_kind_from_string(require_field<std::string>(r, "comparison_kind", context + " row"));
    } catch (const InvalidArgument& e) {
      throw FormatError(context + ": field 'comparison_kind': " + e.what());
    }
    if (r.contains("sample_size") && !r.at("sample_size").is_null()) {
      row.sample_size = require_field<std::size_t>(r, "sample_size", context + " row");
    }
    if (row.sample_size.has_value() != (row.kind == ComparisonKind::kSampleVsSpanning)) {
      throw FormatError(context + ": field 'sample_size' must be present exactly for sample-vs-spanning rows");
    }
    row.source_seed = require_field<std::uint64_t>(r, "source_seed", context + " row");
    row.target_seed = require_field<std::uint64_t>(r, "target_seed", context + " row");
    row.alignment_distance = require_field<double>(r, "alignment_distance", context + " row");
    row.topic_overlap = require_field<double>(r, "topic_overlap", context + " row");
    report.rows.push_back(row);
  }
  for (const auto& s : require_field<json>(j, "per_k", context)) {
    const std::string sctx = context + " per_k";
    TopicCountStability stability;
    stability.k = require_field<int>(s, "k", sctx);
    const json band = require_field<json>(s, "band", sctx);
    stability.band = {stability.k,
                      require_field<double>(band, "mean", sctx + " band"),
                      require_field<double>(band, "sd", sctx + " band"),
                      require_field<double>(band, "min", sctx + " band"),
                      require_field<double>(band, "max", sctx + " band"),
                      require_field<std::size_t>(band, "n", sctx + " band")};
    for (const auto& z : require_field<json>(s, "sizes", sctx)) {
      stability.sizes.push_back({require_field<std::size_t>(z, "sample_size", sctx),
                                 require_field<std::size_t>(z, "comparisons", sctx),
                                 require_field<double>(z, "mean_distance", sctx),
                                 require_field<double>(z, "sd_distance", sctx),
                                 require_field<double>(z, "mean_overlap", sctx),
                                 require_field<double>(z, "sd_overlap", sctx)});
    }
    if (s.contains("minimum_stable_size") && !s.at("minimum_stable_size").is_null()) {
      stability.minimum_stable_size = require_field<std::size_t>(s, "minimum_stable_size", sctx);
    }
    report.per_k.push_back(std::move(stability));
  }
  if (report.per_k.empty()) throw FormatError(context + ": field 'per_k' is empty");
  return report;
}

}  // namespace topicstab
