#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ebmc/experiment.hpp"

namespace ebmc {

// Pixel mapping of the plot area. Exposed so tests can recover data values
// from emitted coordinates.
struct PlotGeometry {
    double canvas_width = 800.0;
    double canvas_height = 500.0;
    double plot_left = 60.0;
    double plot_right = 640.0;
    double plot_top = 20.0;
    double plot_bottom = 455.0;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double map_x(double x) const {
        return plot_left + (x - x_min) / (x_max - x_min) * (plot_right - plot_left);
    }
    double map_y(double y) const {
        return plot_bottom - (y - y_min) / (y_max - y_min) * (plot_bottom - plot_top);
    }

    static PlotGeometry for_curves(std::span<const NamedCurve> curves);
};

// Standalone SVG: one polyline per curve over a translucent band of plus or
// minus one standard error, with a legend. Output is a pure function of the
// input curves. Curves of unequal length are rejected.
std::string render_plot_svg(std::span<const NamedCurve> curves);
void render_plot(std::span<const NamedCurve> curves, const std::filesystem::path& path);

}  // namespace ebmc
