#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topicstab/experiment.hpp"

namespace topicstab {

/// Floating-point text used by every CSV: printf "%.12g".
std::string format_number(double value);

/// One summary.csv line. Values are already rounded to their 12-digit CSV text,
/// so anything derived from this table agrees with the file.
struct SummaryRow {
  int k = 0;
  std::size_t sample_size = 0;
  std::size_t comparisons = 0;
  double mean_distance = 0.0;
  double sd_distance = 0.0;
  double mean_overlap = 0.0;
  double sd_overlap = 0.0;
};

std::vector<SummaryRow> summary_table(const StabilityReport& report);

/// Columns: k,comparison_kind,sample_size,source_seed,target_seed,alignment_distance,topic_overlap
std::string render_metrics_csv(const StabilityReport& report);

/// Columns: k,sample_size,comparisons,mean_alignment_distance,sd_alignment_distance,
///          mean_topic_overlap,sd_topic_overlap
std::string render_summary_csv(const std::vector<SummaryRow>& table);

enum class ChartMeasure { kAlignmentDistance, kTopicOverlap };

struct ChartOptions {
  bool log2_x = true;
  double width = 640.0;
  double height = 400.0;
};

struct ChartPoint {
  std::size_t sample_size;
  double value;
  double sd;
  double px;  // SVG user units; y grows downwards
  double py;
};

struct ChartSeries {
  int k;
  std::string color;
  std::vector<ChartPoint> points;  // ascending sample size
};

struct ChartBand {
  int k;
  std::string color;
  double low;
  double high;
};

struct ChartStableLine {
  int k;
  std::string color;
  std::size_t sample_size;
  double px;
};

struct ChartLayout {
  ChartMeasure measure;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<ChartSeries> series;
  std::vector<ChartBand> bands;              // alignment-distance chart only
  std::vector<ChartStableLine> stable_lines;  // alignment-distance chart only
};

/// 20 green, 40 blue, 60 red, 80 yellow; other k values cycle through a fixed palette.
std::string color_for_k(int k);

ChartLayout layout_chart(const StabilityReport& report, const std::vector<SummaryRow>& table, ChartMeasure measure,
                         const ChartOptions& options = {});

std::string render_chart_svg(const ChartLayout& layout, const ChartOptions& options = {});

/// Writes metrics.csv and summary.csv into outdir.
void emit_csv(const StabilityReport& report, const std::filesystem::path& outdir);

/// Writes alignment_distance.svg and topic_overlap.svg into outdir.
void emit_charts(const StabilityReport& report, const std::filesystem::path& outdir, const ChartOptions& options = {});

}  // namespace topicstab
