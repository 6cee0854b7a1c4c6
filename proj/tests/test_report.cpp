#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "topicstab/error.hpp"
#include "topicstab/report.hpp"

using namespace topicstab;
namespace fs = std::filesystem;

namespace {

// One k per entry; sizes {100, 400}, R=2, S=2 (4 comparisons per size).
StabilityReport hand_report(std::vector<int> ks, bool stable) {
  StabilityReport report;
  report.corpus_fingerprint = "f";
  report.plan.k_values = ks;
  report.plan.spanning_count = 2;
  report.plan.sample_sizes = {100, 400};
  report.plan.replicates_per_size = 2;
  for (int k : ks) {
    report.rows.push_back({k, ComparisonKind::kSpanningVsSpanning, std::nullopt, 1, 2, 0.2, 0.9});
    report.rows.push_back({k, ComparisonKind::kSpanningVsSpanning, std::nullopt, 2, 1, 0.22, 0.95});
    for (std::size_t n : {100, 400}) {
      for (int r = 0; r < 4; ++r) {
        const double d = (n == 100 ? 0.5 : 0.21) + 0.01 * r + 1.0 / 3.0 * 1e-3;
        report.rows.push_back({k, ComparisonKind::kSampleVsSpanning, n, 10u + r, 1u + r % 2, d, n == 100 ? 0.5 : 0.85});
      }
    }
    TopicCountStability s;
    s.k = k;
    s.band = {k, 0.21, 0.0141421356237, 0.2, 0.22, 2};
    s.sizes = {{100, 4, 0.515333333333333, 0.0129099444874, 0.5, 0.0},
               {400, 4, 0.225333333333333, 0.0129099444874, 0.85, 0.0}};
    if (stable) s.minimum_stable_size = 400;
    report.per_k.push_back(s);
  }
  return report;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("topicstab_test_report_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("number formatting uses 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(123456.7890123456) == "123456.789012");
}

TEST_CASE("metrics.csv layout") {
  const auto csv = render_metrics_csv(hand_report({20}, true));
  std::istringstream in(csv);
  std::string header, first, sample;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, sample);
  std::getline(in, sample);
  CHECK(header == "k,comparison_kind,sample_size,source_seed,target_seed,alignment_distance,topic_overlap");
  CHECK(first == "20,spanning-vs-spanning,,1,2,0.2,0.9");
  CHECK(sample == "20,sample-vs-spanning,100,10,1,0.500333333333,0.5");
  CHECK(count(csv, "\n") == 1 + 2 + 8);
}

TEST_CASE("summary.csv has one row per (k, size)") {
  const auto table = summary_table(hand_report({20}, true));
  const auto csv = render_summary_csv(table);
  CHECK(count(csv, "\n") == 3);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "k,sample_size,comparisons,mean_alignment_distance,sd_alignment_distance,mean_topic_overlap,sd_topic_overlap");
  CHECK(csv.find("20,100,4,0.515333333333,0.0129099444874,0.5,0\n") != std::string::npos);
}

TEST_CASE("emission is byte-identical across runs") {
  const auto report = hand_report({20, 40}, true);
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  emit_csv(report, a);
  emit_charts(report, a);
  emit_csv(report, b);
  emit_charts(report, b);
  for (const char* f : {"metrics.csv", "summary.csv", "alignment_distance.svg", "topic_overlap.svg"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("one dashed stability line per k with a stable size") {
  const auto table_stable = summary_table(hand_report({20, 40, 60}, true));
  const auto stable = hand_report({20, 40, 60}, true);
  const auto svg = render_chart_svg(layout_chart(stable, table_stable, ChartMeasure::kAlignmentDistance));
  CHECK(count(svg, "stroke-dasharray") == 3);
  CHECK(count(svg, "class=\"stable-size\"") == 3);

  auto partial = hand_report({20, 40}, true);
  partial.per_k[1].minimum_stable_size.reset();
  const auto svg_partial = render_chart_svg(layout_chart(partial, summary_table(partial), ChartMeasure::kAlignmentDistance));
  CHECK(count(svg_partial, "stroke-dasharray") == 1);

  const auto overlap = render_chart_svg(layout_chart(stable, table_stable, ChartMeasure::kTopicOverlap));
  CHECK(count(overlap, "stroke-dasharray") == 0);
  CHECK(count(overlap, "class=\"band\"") == 0);
}

TEST_CASE("topic overlap chart range and colors") {
  const auto report = hand_report({20, 40, 60, 80}, false);
  const auto layout = layout_chart(report, summary_table(report), ChartMeasure::kTopicOverlap);
  CHECK(layout.y_min >= 0.0);
  CHECK(layout.y_max <= 1.05);
  REQUIRE(layout.series.size() == 4);
  CHECK(layout.series[0].color == "#2ca02c");
  CHECK(layout.series[1].color == "#1f77b4");
  CHECK(layout.series[2].color == "#d62728");
  CHECK(layout.series[3].color == "#e6c229");
  const auto svg = render_chart_svg(layout);
  CHECK(count(svg, "class=\"point\"") == 8);
  CHECK(count(svg, "class=\"whisker\"") == 8);
}

TEST_CASE("chart points come from the summary table") {
  const auto report = hand_report({20}, true);
  const auto table = summary_table(report);
  const auto layout = layout_chart(report, table, ChartMeasure::kAlignmentDistance);
  REQUIRE(layout.series.size() == 1);
  REQUIRE(layout.series[0].points.size() == 2);
  CHECK(layout.series[0].points[0].value == table[0].mean_distance);
  CHECK(layout.series[0].points[0].sd == table[0].sd_distance);
  CHECK(layout.series[0].points[0].value == std::stod("0.515333333333"));
  // Decreasing distance renders as increasing SVG y.
  CHECK(layout.series[0].points[0].py <= layout.series[0].points[1].py);
  CHECK(layout.series[0].points[0].px < layout.series[0].points[1].px);
}

TEST_CASE("axis scaling options") {
  auto report = hand_report({20}, true);
  report.per_k[0].sizes.push_back({1600, 4, 0.2, 0.01, 0.9, 0.0});
  const auto table = summary_table(report);
  ChartOptions log_axis, linear_axis;
  linear_axis.log2_x = false;
  const auto lg = layout_chart(report, table, ChartMeasure::kAlignmentDistance, log_axis).series[0].points;
  const auto ln = layout_chart(report, table, ChartMeasure::kAlignmentDistance, linear_axis).series[0].points;
  // 100 -> 400 -> 1600 are evenly spaced on log2, not on a linear axis.
  CHECK((lg[1].px - lg[0].px) == doctest::Approx(lg[2].px - lg[1].px));
  CHECK((ln[2].px - ln[1].px) == doctest::Approx(4.0 * (ln[1].px - ln[0].px)));
}

TEST_CASE("I/O failures name the path") {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  fs::create_directories(dir / "metrics.csv");  // a directory where the file should go
  CHECK_THROWS_WITH_AS(emit_csv(hand_report({20}, true), dir), doctest::Contains("metrics.csv"), IoError);
}
