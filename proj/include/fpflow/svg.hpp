#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fpflow {

struct SvgSeries {
    std::string name;
    std::string color;  ///< SVG color, e.g. "#1f6fb4"
    std::vector<std::pair<double, double>> points;
};

/// Static line chart with axes, ticks and a legend.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<std::string>& header_comments = {});

}  // namespace fpflow
