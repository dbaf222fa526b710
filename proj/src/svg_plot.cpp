// src/svg_plot.cpp
#include "elmsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace elmsim::plot {

namespace {

constexpr double kWidth = 800.0;
constexpr double kPanelHeight = 240.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kGap = 30.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-300) {
            const double pad = std::abs(lo) > 0 ? std::abs(lo) * 0.1 : 1.0;
            lo -= pad;
            hi += pad;
        }
    }
};

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
    if (!(hi > lo) || target_count < 2) return {lo};
    const double raw = (hi - lo) / (target_count - 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
        ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    }
    return ticks;
}

std::string render_svg(const Figure& figure, std::size_t max_points) {
    const std::size_t panels = std::max<std::size_t>(figure.panels.size(), 1);
    const double height = kTop + panels * kPanelHeight + (panels - 1) * kGap + kBottom;
    const double plot_w = kWidth - kLeft - kRight;

    Range xr;
    for (const auto& p : figure.panels)
        for (const auto& s : p.series)
            for (const auto& [x, y] : s.points) xr.add(x);
    xr.finish();
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(figure.title) + "</text>\n";

    for (std::size_t pi = 0; pi < figure.panels.size(); ++pi) {
        const Panel& panel = figure.panels[pi];
        const double top = kTop + pi * (kPanelHeight + kGap);
        const double bottom = top + kPanelHeight;
        auto ty = [&](double y) { return panel.log_y ? std::log10(y) : y; };

        Range yr;
        for (const auto& s : panel.series)
            for (const auto& [x, y] : s.points)
                if (!panel.log_y || y > 0) yr.add(ty(y));
        yr.finish();
        auto sy = [&](double y) { return bottom - (ty(y) - yr.lo) / (yr.hi - yr.lo) * kPanelHeight; };

        svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) + "\" height=\"" +
               num(kPanelHeight) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (double v : nice_ticks(yr.lo, yr.hi, 5)) {
            const double py = bottom - (v - yr.lo) / (yr.hi - yr.lo) * kPanelHeight;
            svg += "<line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
                   num(py) + "\" stroke=\"#444\"/>\n";
            svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
                   (panel.log_y ? "1e" + label(v) : label(v)) + "</text>\n";
        }
        for (double v : nice_ticks(xr.lo, xr.hi, 8)) {
            const double px = sx(v);
            svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(px) + "\" y2=\"" +
                   num(bottom + 4) + "\" stroke=\"#444\"/>\n";
            if (pi + 1 == figure.panels.size()) {
                svg += "<text x=\"" + num(px) + "\" y=\"" + num(bottom + 18) + "\" text-anchor=\"middle\">" +
                       label(v) + "</text>\n";
            }
        }
        svg += "<text transform=\"translate(16," + num((top + bottom) / 2) +
               ") rotate(-90)\" text-anchor=\"middle\">" + escape(panel.y_label) + "</text>\n";

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const Series& series = panel.series[si];
            const char* color = kColors[si % std::size(kColors)];
            const std::size_t stride = std::max<std::size_t>(1, (series.points.size() + max_points - 1) / max_points);
            std::string path;
            std::string marks;
            for (std::size_t k = 0; k < series.points.size(); k += stride) {
                const auto& [x, y] = series.points[k];
                if (panel.log_y && !(y > 0)) continue;
                path += (path.empty() ? "M" : " L") + num(sx(x)) + "," + num(sy(y));
                if (series.markers) {
                    marks += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) + "\" r=\"3\" fill=\"" +
                             color + "\"/>\n";
                }
            }
            if (!path.empty()) {
                svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
            }
            svg += marks;
            svg += "<text x=\"" + num(kLeft + 8) + "\" y=\"" + num(top + 16 + 14 * si) + "\" fill=\"" + color +
                   "\">" + escape(series.name) + "</text>\n";
        }
    }
    svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(height - 10) + "\" text-anchor=\"middle\">" +
           escape(figure.x_label) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace elmsim::plot
