#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hysop::io {

enum class PlotKind { prediction, loop, error };
std::string to_string(PlotKind kind);
PlotKind plot_kind_from_string(const std::string& name);

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

struct Figure {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

// Standalone SVG with axes, ticks, labels and one polyline per series.
// Output bytes depend only on the figure. Throws ParameterError for a
// figure without points.
std::string render_svg(const Figure& figure);

// The three figure kinds for one curve: B against t (reference and
// prediction), B against H (reference and predicted loop) and |error|
// against t. `prediction` may be empty for dataset-only plots.
Figure make_figure(PlotKind kind, std::span<const double> t, std::span<const double> h,
                   std::span<const double> reference, std::span<const double> prediction,
                   const std::string& title);

}  // namespace hysop::io
