// include/elmsim/svg_plot.hpp
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace elmsim::plot {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool markers = false;
};

struct Panel {
    std::string y_label;
    std::vector<Series> series;
    bool log_y = false;  // points with y <= 0 are dropped
};

struct Figure {
    std::string title;
    std::string x_label;
    std::vector<Panel> panels;  // stacked vertically, shared x axis
};

/// Standalone SVG document. Series are thinned to at most `max_points`
/// each by uniform striding.
std::string render_svg(const Figure& figure, std::size_t max_points = 2000);

/// "Nice" tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

}  // namespace elmsim::plot
