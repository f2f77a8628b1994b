#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sicvpr {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

// Self-contained SVG line chart, one polyline per series.
void write_line_chart_svg(const ChartSpec& spec, const std::vector<ChartSeries>& series,
                          const std::filesystem::path& path);

}  // namespace sicvpr
