#pragma once

#include <string>
#include <vector>

namespace invlab {

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

// Minimal dependency-free line plot: axes, ticks, polylines, legend.
// log_y plots log10(y), skipping nonpositive values.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series, bool log_y = false);

}  // namespace invlab
