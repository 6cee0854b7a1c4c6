#include "topicstab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "topicstab/error.hpp"

namespace topicstab {

namespace fs = std::filesystem;

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

double rounded(double value) { return std::stod(format_number(value)); }

std::string fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 110.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 52.0;

}  // namespace

std::vector<SummaryRow> summary_table(const StabilityReport& report) {
  std::vector<SummaryRow> table;
  for (const auto& s : report.per_k) {
    for (const auto& z : s.sizes) {
      table.push_back({s.k, z.sample_size, z.comparisons, rounded(z.mean_distance), rounded(z.sd_distance),
                       rounded(z.mean_overlap), rounded(z.sd_overlap)});
    }
  }
  return table;
}

std::string render_metrics_csv(const StabilityReport& report) {
  std::ostringstream out;
  out << "k,comparison_kind,sample_size,source_seed,target_seed,alignment_distance,topic_overlap\n";
  for (const auto& r : report.rows) {
    out << r.k << ',' << to_string(r.kind) << ',' << (r.sample_size ? std::to_string(*r.sample_size) : "") << ','
        << r.source_seed << ',' << r.target_seed << ',' << format_number(r.alignment_distance) << ','
        << format_number(r.topic_overlap) << '\n';
  }
  return out.str();
}

std::string render_summary_csv(const std::vector<SummaryRow>& table) {
  std::ostringstream out;
  out << "k,sample_size,comparisons,mean_alignment_distance,sd_alignment_distance,mean_topic_overlap,sd_topic_overlap\n";
  for (const auto& r : table) {
    out << r.k << ',' << r.sample_size << ',' << r.comparisons << ',' << format_number(r.mean_distance) << ','
        << format_number(r.sd_distance) << ',' << format_number(r.mean_overlap) << ',' << format_number(r.sd_overlap)
        << '\n';
  }
  return out.str();
}

std::string color_for_k(int k) {
  switch (k) {
    case 20: return "#2ca02c";
    case 40: return "#1f77b4";
    case 60: return "#d62728";
    case 80: return "#e6c229";
    default: break;
  }
  static const char* kPalette[] = {"#9467bd", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
  return kPalette[static_cast<unsigned>(k) % 6];
}

ChartLayout layout_chart(const StabilityReport& report, const std::vector<SummaryRow>& table, ChartMeasure measure,
                         const ChartOptions& options) {
  const bool distance = measure == ChartMeasure::kAlignmentDistance;
  ChartLayout layout;
  layout.measure = measure;

  std::size_t min_size = 0, max_size = 0;
  double top = 0.0;
  for (const auto& r : table) {
    min_size = min_size == 0 ? r.sample_size : std::min(min_size, r.sample_size);
    max_size = std::max(max_size, r.sample_size);
    top = std::max(top, distance ? r.mean_distance + r.sd_distance : r.mean_overlap + r.sd_overlap);
  }
  if (distance) {
    for (const auto& s : report.per_k) top = std::max(top, s.band.mean + s.band.sd);
    layout.y_max = std::clamp(top * 1.1, 0.05, 1.05);
  } else {
    layout.y_max = 1.05;
  }

  auto x_of = [&](double n) {
    const double lo = options.log2_x ? std::log2(static_cast<double>(std::max<std::size_t>(min_size, 1))) : static_cast<double>(min_size);
    const double hi = options.log2_x ? std::log2(static_cast<double>(std::max<std::size_t>(max_size, 1))) : static_cast<double>(max_size);
    const double v = options.log2_x ? std::log2(n) : n;
    const double plot_w = options.width - kMarginLeft - kMarginRight;
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return kMarginLeft + t * plot_w;
  };
  auto y_of = [&](double v) {
    const double plot_h = options.height - kMarginTop - kMarginBottom;
    const double t = (std::clamp(v, layout.y_min, layout.y_max) - layout.y_min) / (layout.y_max - layout.y_min);
    return options.height - kMarginBottom - t * plot_h;
  };

  for (const auto& s : report.per_k) {
    ChartSeries series{s.k, color_for_k(s.k), {}};
    for (const auto& r : table) {
      if (r.k != s.k) continue;
      const double value = distance ? r.mean_distance : r.mean_overlap;
      const double sd = distance ? r.sd_distance : r.sd_overlap;
      series.points.push_back({r.sample_size, value, sd, x_of(static_cast<double>(r.sample_size)), y_of(value)});
    }
    std::sort(series.points.begin(), series.points.end(),
              [](const ChartPoint& a, const ChartPoint& b) { return a.sample_size < b.sample_size; });
    layout.series.push_back(std::move(series));
    if (distance) {
      layout.bands.push_back({s.k, color_for_k(s.k), s.band.mean - s.band.sd, s.band.mean + s.band.sd});
      if (s.minimum_stable_size) {
        layout.stable_lines.push_back(
            {s.k, color_for_k(s.k), *s.minimum_stable_size, x_of(static_cast<double>(*s.minimum_stable_size))});
      }
    }
  }
  return layout;
}

std::string render_chart_svg(const ChartLayout& layout, const ChartOptions& options) {
  const bool distance = layout.measure == ChartMeasure::kAlignmentDistance;
  const double left = kMarginLeft, right = options.width - kMarginRight;
  const double top = kMarginTop, bottom = options.height - kMarginBottom;
  auto y_of = [&](double v) {
    const double t = (std::clamp(v, layout.y_min, layout.y_max) - layout.y_min) / (layout.y_max - layout.y_min);
    return bottom - t * (bottom - top);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(options.width) << "\" height=\""
      << fixed(options.height) << "\" viewBox=\"0 0 " << fixed(options.width) << ' ' << fixed(options.height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fixed(options.width) << "\" height=\"" << fixed(options.height)
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(options.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << (distance ? "Alignment distance" : "Topic overlap") << "</text>\n";

  for (const auto& band : layout.bands) {
    const double y_hi = y_of(band.high), y_lo = y_of(band.low);
    svg << "<rect class=\"band\" data-k=\"" << band.k << "\" x=\"" << fixed(left) << "\" y=\"" << fixed(y_hi)
        << "\" width=\"" << fixed(right - left) << "\" height=\"" << fixed(std::max(0.0, y_lo - y_hi))
        << "\" fill=\"" << band.color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }

  // Axes and y ticks.
  svg << "<line class=\"axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(bottom) << "\" x2=\"" << fixed(right)
      << "\" y2=\"" << fixed(bottom) << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
      << "\" y2=\"" << fixed(bottom) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = layout.y_min + (layout.y_max - layout.y_min) * i / 5.0;
    const double y = y_of(v);
    svg << "<line class=\"tick\" x1=\"" << fixed(left - 4) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(left - 7) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">" << fixed(v)
        << "</text>\n";
  }
  std::vector<std::pair<std::size_t, double>> x_ticks;
  for (const auto& s : layout.series) {
    for (const auto& p : s.points) x_ticks.emplace_back(p.sample_size, p.px);
  }
  std::sort(x_ticks.begin(), x_ticks.end());
  x_ticks.erase(std::unique(x_ticks.begin(), x_ticks.end()), x_ticks.end());
  for (const auto& [n, x] : x_ticks) {
    svg << "<line class=\"tick\" x1=\"" << fixed(x) << "\" y1=\"" << fixed(bottom) << "\" x2=\"" << fixed(x)
        << "\" y2=\"" << fixed(bottom + 4) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(bottom + 16) << "\" text-anchor=\"middle\">" << n
        << "</text>\n";
  }
  svg << "<text x=\"" << fixed((left + right) / 2) << "\" y=\"" << fixed(options.height - 10)
      << "\" text-anchor=\"middle\">sample size" << (options.log2_x ? " (log2 scale)" : "") << "</text>\n";

  for (const auto& s : layout.series) {
    svg << "<polyline class=\"series\" data-k=\"" << s.k << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      svg << (i ? " " : "") << fixed(s.points[i].px) << ',' << fixed(s.points[i].py);
    }
    svg << "\"/>\n";
    for (const auto& p : s.points) {
      svg << "<line class=\"whisker\" data-k=\"" << s.k << "\" x1=\"" << fixed(p.px) << "\" y1=\""
          << fixed(y_of(p.value - p.sd)) << "\" x2=\"" << fixed(p.px) << "\" y2=\"" << fixed(y_of(p.value + p.sd))
          << "\" stroke=\"" << s.color << "\"/>\n";
      svg << "<circle class=\"point\" data-k=\"" << s.k << "\" cx=\"" << fixed(p.px) << "\" cy=\"" << fixed(p.py)
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
  }

  for (const auto& line : layout.stable_lines) {
    svg << "<line class=\"stable-size\" data-k=\"" << line.k << "\" x1=\"" << fixed(line.px) << "\" y1=\""
        << fixed(top) << "\" x2=\"" << fixed(line.px) << "\" y2=\"" << fixed(bottom) << "\" stroke=\"" << line.color
        << "\" stroke-dasharray=\"6,4\"/>\n";
  }

  double legend_y = top + 10;
  for (const auto& s : layout.series) {
    svg << "<rect x=\"" << fixed(right + 14) << "\" y=\"" << fixed(legend_y - 8) << "\" width=\"10\" height=\"10\" fill=\""
        << s.color << "\"/>\n";
    svg << "<text x=\"" << fixed(right + 30) << "\" y=\"" << fixed(legend_y + 1) << "\">k = " << s.k << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_csv(const StabilityReport& report, const fs::path& outdir) {
  fs::create_directories(outdir);
  write_text(outdir / "metrics.csv", render_metrics_csv(report));
  write_text(outdir / "summary.csv", render_summary_csv(summary_table(report)));
}

void emit_charts(const StabilityReport& report, const fs::path& outdir, const ChartOptions& options) {
  fs::create_directories(outdir);
  const auto table = summary_table(report);
  write_text(outdir / "alignment_distance.svg",
             render_chart_svg(layout_chart(report, table, ChartMeasure::kAlignmentDistance, options), options));
  write_text(outdir / "topic_overlap.svg",
             render_chart_svg(layout_chart(report, table, ChartMeasure::kTopicOverlap, options), options));
}

}  // namespace topicstab
