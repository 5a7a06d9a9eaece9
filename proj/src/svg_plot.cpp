#include "sensorassoc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace sensorassoc {

namespace {

// Ten-colour qualitative palette; groups beyond ten wrap around.
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* colour(int group) {
    const int n = static_cast<int>(std::size(kPalette));
    return kPalette[((group - 1) % n + n) % n];
}

/// Plot frame with margins; maps data coordinates to pixels.
struct Frame {
    double left = 70, right = 150, top = 40, bottom = 60;
    double width, height;
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void header(std::ostringstream& svg, const PlotOptions& o) {
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
        << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!o.title.empty()) {
        svg << "<text x=\"" << o.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(o.title)
            << "</text>\n";
    }
}

void axes(std::ostringstream& svg, const Frame& f, const PlotOptions& o, const std::vector<double>& xticks,
          const std::vector<double>& yticks) {
    const double xa = f.left, xb = f.width - f.right, ya = f.top, yb = f.height - f.bottom;
    svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
        << "<rect x=\"" << num(xa) << "\" y=\"" << num(ya) << "\" width=\"" << num(xb - xa) << "\" height=\""
        << num(yb - ya) << "\"/>\n";
    for (double t : xticks) {
        svg << "<line x1=\"" << num(f.px(t)) << "\" y1=\"" << num(yb) << "\" x2=\"" << num(f.px(t)) << "\" y2=\""
            << num(yb + 5) << "\"/>\n";
    }
    for (double t : yticks) {
        svg << "<line x1=\"" << num(xa - 5) << "\" y1=\"" << num(f.py(t)) << "\" x2=\"" << num(xa) << "\" y2=\""
            << num(f.py(t)) << "\"/>\n";
    }
    svg << "</g>\n<g class=\"tick-labels\">\n";
    for (double t : xticks) {
        svg << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(yb + 18) << "\" text-anchor=\"middle\">"
            << tick_label(t) << "</text>\n";
    }
    for (double t : yticks) {
        svg << "<text x=\"" << num(xa - 8) << "\" y=\"" << num(f.py(t) + 4) << "\" text-anchor=\"end\">"
            << tick_label(t) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << num((xa + xb) / 2) << "\" y=\"" << num(f.height - 18) << "\" text-anchor=\"middle\">"
        << escape(o.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num((ya + yb) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num((ya + yb) / 2) << ")\">" << escape(o.y_label) << "</text>\n";
}

void legend(std::ostringstream& svg, const Frame& f, const std::vector<std::pair<std::string, const char*>>& entries) {
    if (entries.empty()) return;
    const double x = f.width - f.right + 15;
    svg << "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double y = f.top + 10 + 18.0 * static_cast<double>(i);
        svg << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
            << entries[i].second << "\"/>\n"
            << "<text x=\"" << num(x + 16) << "\" y=\"" << num(y) << "\">" << escape(entries[i].first) << "</text>\n";
    }
    svg << "</g>\n";
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(1, target_count);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

std::string scatter_svg(std::span<const ScatterPoint> points, const PlotOptions& options) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (points.empty()) {
        xmin = ymin = 0.0;
        xmax = ymax = 1.0;
    }
    auto pad = [](double& lo, double& hi) {
        const double span = hi - lo;
        const double margin = span > 0.0 ? 0.05 * span : std::max(1.0, std::abs(lo) * 0.05);
        lo -= margin;
        hi += margin;
    };
    pad(xmin, xmax);
    pad(ymin, ymax);

    Frame f;
    f.width = options.width;
    f.height = options.height;
    f.x0 = xmin;
    f.x1 = xmax;
    f.y0 = ymin;
    f.y1 = ymax;

    std::ostringstream svg;
    header(svg, options);
    axes(svg, f, options, nice_ticks(xmin, xmax), nice_ticks(ymin, ymax));

    std::set<int> groups;
    svg << "<g class=\"points\" stroke=\"none\">\n";
    for (const auto& p : points) {
        const char* fill = p.group ? colour(*p.group) : "#444444";
        if (p.group) groups.insert(*p.group);
        svg << "<circle cx=\"" << num(f.px(p.x)) << "\" cy=\"" << num(f.py(p.y)) << "\" r=\"3.5\" fill=\"" << fill
            << "\" fill-opacity=\"0.85\"/>\n";
    }
    svg << "</g>\n";

    std::vector<std::pair<std::string, const char*>> entries;
    for (int g : groups) entries.emplace_back(options.legend_prefix + std::to_string(g), colour(g));
    legend(svg, f, entries);
    svg << "</svg>\n";
    return svg.str();
}

std::string bar_chart_svg(const std::vector<std::string>& categories, const std::vector<std::string>& series,
                          const std::vector<std::vector<double>>& values, const PlotOptions& options) {
    Frame f;
    f.width = options.width;
    f.height = options.height;
    f.x0 = 0.0;
    f.x1 = std::max<double>(1.0, static_cast<double>(categories.size()));
    f.y0 = 0.0;
    f.y1 = 1.0;

    std::ostringstream svg;
    header(svg, options);
    axes(svg, f, options, {}, nice_ticks(0.0, 1.0, 5));

    const double group_w = f.px(1.0) - f.px(0.0);
    const double bar_w = series.empty() ? 0.0 : 0.8 * group_w / static_cast<double>(series.size());
    svg << "<g class=\"bars\" stroke=\"none\">\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (std::size_t c = 0; c < categories.size(); ++c) {
            const double v = std::clamp(values.at(s).at(c), 0.0, 1.0);
            const double x = f.px(static_cast<double>(c)) + 0.1 * group_w + bar_w * static_cast<double>(s);
            svg << "<rect x=\"" << num(x) << "\" y=\"" << num(f.py(v)) << "\" width=\"" << num(bar_w)
                << "\" height=\"" << num(f.py(0.0) - f.py(v)) << "\" fill=\"" << colour(static_cast<int>(s) + 1)
                << "\"/>\n";
        }
    }
    svg << "</g>\n<g class=\"category-labels\">\n";
    for (std::size_t c = 0; c < categories.size(); ++c) {
        svg << "<text x=\"" << num(f.px(static_cast<double>(c) + 0.5)) << "\" y=\"" << num(f.py(0.0) + 18)
            << "\" text-anchor=\"middle\">" << escape(categories[c]) << "</text>\n";
    }
    svg << "</g>\n";

    std::vector<std::pair<std::string, const char*>> entries;
    for (std::size_t s = 0; s < series.size(); ++s) entries.emplace_back(series[s], colour(static_cast<int>(s) + 1));
    legend(svg, f, entries);
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sensorassoc
