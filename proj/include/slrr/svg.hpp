#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slrr/types.hpp"

namespace slrr {

/**
 * Grayscale heat map of a matrix (affinity-style block-diagonal
 * visualization): value 1 paints black, 0 white, clamped outside [0,1].
 */
inline void write_heatmap_svg(const std::string& path, const Matrix& W, int cell_px = 4) {
    const Eigen::Index rows = W.rows(), cols = W.cols();
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("write_heatmap_svg: empty matrix");

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell_px << "\" height=\""
        << rows * cell_px << "\" shape-rendering=\"crispEdges\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double v = std::clamp(W(i, j), 0.0, 1.0);
            const int gray = static_cast<int>(std::lround(255.0 * (1.0 - v)));
            if (gray == 255)
                continue; // background
            svg << "<rect x=\"" << j * cell_px << "\" y=\"" << i * cell_px << "\" width=\"" << cell_px
                << "\" height=\"" << cell_px << "\" fill=\"rgb(" << gray << ',' << gray << ',' << gray << ")\"/>\n";
        }
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << svg.str();
}

struct ChartSeries {
    std::string name;
    std::vector<double> y; // one per x value
};

/**
 * Minimal line chart: one polyline per series over shared x values, log-x
 * when the x span exceeds a decade. Used for sweep error curves.
 */
inline void write_line_chart_svg(const std::string& path, const std::string& title,
                                 const std::vector<double>& xs, const std::vector<ChartSeries>& series,
                                 const std::string& x_label, const std::string& y_label) {
    if (xs.empty() || series.empty())
        throw std::invalid_argument("write_line_chart_svg: nothing to plot");

    const int width = 640, height = 420, margin = 60;
    const double plot_w = width - 2.0 * margin, plot_h = height - 2.0 * margin;

    const bool logx = xs.front() > 0.0 && xs.back() / xs.front() > 10.0;
    auto xcoord = [&](double x) {
        const double lo = logx ? std::log10(xs.front()) : xs.front();
        const double hi = logx ? std::log10(xs.back()) : xs.back();
        const double v = logx ? std::log10(x) : x;
        const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return margin + t * plot_w;
    };

    double ymax = 0.0;
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v))
                ymax = std::max(ymax, v);
    if (ymax <= 0.0)
        ymax = 1.0;
    auto ycoord = [&](double y) { return height - margin - (y / ymax) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"#000\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << x_label
        << (logx ? " (log scale)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << height / 2 << ")\">" << y_label << "</text>\n";

    for (size_t i = 0; i < xs.size(); ++i) {
        const double x = xcoord(xs[i]);
        svg << "<line x1=\"" << x << "\" y1=\"" << height - margin << "\" x2=\"" << x << "\" y2=\""
            << height - margin + 5 << "\" stroke=\"#000\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << height - margin + 18 << "\" text-anchor=\"middle\">" << xs[i]
            << "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        const double yv = ymax * t / 4.0;
        svg << "<text x=\"" << margin - 8 << "\" y=\"" << ycoord(yv) + 4 << "\" text-anchor=\"end\">" << yv
            << "</text>\n";
    }

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < xs.size() && i < series[s].y.size(); ++i) {
            if (!std::isfinite(series[s].y[i]))
                continue;
            svg << xcoord(xs[i]) << ',' << ycoord(series[s].y[i]) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << width - margin + 6 << "\" y=\"" << margin + 16 * static_cast<int>(s)
            << "\" fill=\"" << color << "\">" << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << svg.str();
}

} // namespace slrr
