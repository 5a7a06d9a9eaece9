#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sensorassoc {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<int> group;  ///< colour key; points without a group are drawn in grey
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string legend_prefix = "Target ";
    int width = 720;
    int height = 540;
};

/// Deterministic SVG scatter plot with axes, ticks and a legend of groups.
std::string scatter_svg(std::span<const ScatterPoint> points, const PlotOptions& options);

/// Grouped bar chart: values[s][c] is the bar of series s in category c, on a [0, 1] axis.
std::string bar_chart_svg(const std::vector<std::string>& categories, const std::vector<std::string>& series,
                          const std::vector<std::vector<double>>& values, const PlotOptions& options);

/// Evenly spaced "nice" tick values (1, 2 or 5 times a power of ten) covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

}  // namespace sensorassoc
