#include "ebmc/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ebmc {

namespace {

constexpr std::array<const char*, 7> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

PlotGeometry PlotGeometry::for_curves(std::span<const NamedCurve> curves) {
    PlotGeometry g;
    if (curves.empty()) return g;

    const std::size_t n = curves.front().curve.size();
    g.x_min = 0.0;
    g.x_max = n > 1 ? static_cast<double>(n - 1) : 1.0;

    double lo = curves.front().curve.mean.front() - curves.front().curve.std_error.front();
    double hi = lo;
    for (const auto& named : curves) {
        for (std::size_t i = 0; i < named.curve.size(); ++i) {
            lo = std::min(lo, named.curve.mean[i] - named.curve.std_error[i]);
            hi = std::max(hi, named.curve.mean[i] + named.curve.std_error[i]);
        }
    }
    double pad = (hi - lo) * 0.05;
    if (pad <= 0.0) pad = 1.0;
    g.y_min = lo - pad;
    g.y_max = hi + pad;
    return g;
}

std::string render_plot_svg(std::span<const NamedCurve> curves) {
    if (curves.empty()) throw std::invalid_argument("render_plot: no curves");
    const std::size_t n = curves.front().curve.size();
    if (n == 0) throw std::invalid_argument("render_plot: empty curve");
    for (const auto& named : curves) {
        if (named.curve.size() != n ||
            named.curve.std_error.size() != n || named.curve.count.size() != n) {
            throw std::invalid_argument("render_plot: curve length mismatch");
        }
    }

    const PlotGeometry g = PlotGeometry::for_curves(curves);

    const std::string width = std::to_string(static_cast<int>(g.canvas_width));
    const std::string height = std::to_string(static_cast<int>(g.canvas_height));
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + width + "\" height=\"" +
           height + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + width + "\" height=\"" + height +
           "\" fill=\"white\"/>\n";
    // axes
    svg += "<line x1=\"" + fmt(g.plot_left) + "\" y1=\"" + fmt(g.plot_bottom) + "\" x2=\"" +
           fmt(g.plot_right) + "\" y2=\"" + fmt(g.plot_bottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt(g.plot_left) + "\" y1=\"" + fmt(g.plot_top) + "\" x2=\"" +
           fmt(g.plot_left) + "\" y2=\"" + fmt(g.plot_bottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // axis extent labels
    svg += "<text x=\"" + fmt(g.plot_left) + "\" y=\"" + fmt(g.plot_bottom + 16.0) +
           "\" font-size=\"11\">" + fmt(g.x_min) + "</text>\n";
    svg += "<text x=\"" + fmt(g.plot_right - 20.0) + "\" y=\"" + fmt(g.plot_bottom + 16.0) +
           "\" font-size=\"11\">" + fmt(g.x_max) + "</text>\n";
    svg += "<text x=\"" + fmt(g.plot_left - 52.0) + "\" y=\"" + fmt(g.plot_bottom) +
           "\" font-size=\"11\">" + fmt(g.y_min) + "</text>\n";
    svg += "<text x=\"" + fmt(g.plot_left - 52.0) + "\" y=\"" + fmt(g.plot_top + 10.0) +
           "\" font-size=\"11\">" + fmt(g.y_max) + "</text>\n";
    svg += "<text x=\"" + fmt((g.plot_left + g.plot_right) / 2.0 - 20.0) + "\" y=\"" +
           fmt(g.plot_bottom + 32.0) + "\" font-size=\"12\">episode</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c].curve;
        const char* color = kPalette[c % kPalette.size()];

        // band: forward pass at mean+stderr, backward at mean-stderr
        std::string band;
        for (std::size_t i = 0; i < n; ++i) {
            band += fmt(g.map_x(static_cast<double>(i))) + "," +
                    fmt(g.map_y(curve.mean[i] + curve.std_error[i])) + " ";
        }
        for (std::size_t i = n; i-- > 0;) {
            band += fmt(g.map_x(static_cast<double>(i))) + "," +
                    fmt(g.map_y(curve.mean[i] - curve.std_error[i]));
            if (i != 0) band += " ";
        }
        svg += "<polygon points=\"" + band + "\" fill=\"" + color +
               "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";

        std::string line;
        for (std::size_t i = 0; i < n; ++i) {
            line += fmt(g.map_x(static_cast<double>(i))) + "," + fmt(g.map_y(curve.mean[i]));
            if (i + 1 != n) line += " ";
        }
        svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";

        // legend entry
        const double ly = g.plot_top + 14.0 + 18.0 * static_cast<double>(c);
        svg += "<rect x=\"" + fmt(g.plot_right + 12.0) + "\" y=\"" + fmt(ly - 9.0) +
               "\" width=\"12\" height=\"12\" fill=\"" + std::string(color) + "\"/>\n";
        svg += "<text x=\"" + fmt(g.plot_right + 30.0) + "\" y=\"" + fmt(ly + 1.0) +
               "\" font-size=\"12\">" + escape_xml(curves[c].name) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void render_plot(std::span<const NamedCurve> curves, const std::filesystem::path& path) {
    const std::string svg = render_plot_svg(curves);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << svg;
    if (!out) throw std::runtime_error("failed writing: " + path.string());
}

}  // namespace ebmc
