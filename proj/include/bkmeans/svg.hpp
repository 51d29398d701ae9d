#ifndef BKMEANS_SVG_HPP
#define BKMEANS_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkmeans/matrix.hpp"

namespace bkmeans {

struct PlotOptions {
    std::size_t axis_x = 0;  ///< column plotted on the horizontal axis
    std::size_t axis_y = 1;  ///< column plotted on the vertical axis
    double width = 800.0;
    double height = 800.0;
    double margin = 24.0;
    double point_radius = 1.6;
    double centroid_radius = 5.0;
};

namespace detail {
inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* codebook_color(std::size_t i) {
    static const char* palette[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    return palette[i % 5];
}
}  // namespace detail

/// Writes a static scatter plot: every data point as a small translucent dot
/// and every codebook row as a larger outlined circle (one shape element per
/// point and per centroid). Higher-dimensional inputs are projected onto the
/// two columns selected in the options. The output depends only on the
/// inputs, so repeated calls are byte-identical.
inline void write_scatter_svg(std::ostream& out, const Matrix& data,
                              const std::vector<Matrix>& codebooks,
                              const PlotOptions& opt = {}) {
    if (data.cols() < 2) {
        throw std::invalid_argument("write_scatter_svg: need at least 2 dimensions");
    }
    if (opt.axis_x >= data.cols() || opt.axis_y >= data.cols() || opt.axis_x == opt.axis_y) {
        throw std::invalid_argument("write_scatter_svg: bad axis selection");
    }
    for (const Matrix& cb : codebooks) {
        if (cb.cols() != data.cols()) {
            throw std::invalid_argument("write_scatter_svg: codebook dimensionality differs");
        }
    }

    double min_x = data(0, opt.axis_x), max_x = min_x;
    double min_y = data(0, opt.axis_y), max_y = min_y;
    auto expand = [&](const Matrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            min_x = std::min(min_x, m(i, opt.axis_x));
            max_x = std::max(max_x, m(i, opt.axis_x));
            min_y = std::min(min_y, m(i, opt.axis_y));
            max_y = std::max(max_y, m(i, opt.axis_y));
        }
    };
    expand(data);
    for (const Matrix& cb : codebooks) {
        expand(cb);
    }
    if (max_x == min_x) {
        min_x -= 0.5;
        max_x += 0.5;
    }
    if (max_y == min_y) {
        min_y -= 0.5;
        max_y += 0.5;
    }

    const double span_x = (opt.width - 2.0 * opt.margin) / (max_x - min_x);
    const double span_y = (opt.height - 2.0 * opt.margin) / (max_y - min_y);
    auto px = [&](double x) { return opt.margin + (x - min_x) * span_x; };
    auto py = [&](double y) { return opt.height - opt.margin - (y - min_y) * span_y; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::svg_num(opt.width)
        << "\" height=\"" << detail::svg_num(opt.height) << "\" viewBox=\"0 0 "
        << detail::svg_num(opt.width) << ' ' << detail::svg_num(opt.height) << "\">\n";

    for (std::size_t i = 0; i < data.rows(); ++i) {
        out << "<circle cx=\"" << detail::svg_num(px(data(i, opt.axis_x)))
            << "\" cy=\"" << detail::svg_num(py(data(i, opt.axis_y)))
            << "\" r=\"" << detail::svg_num(opt.point_radius)
            << "\" fill=\"#44618c\" fill-opacity=\"0.55\"/>\n";
    }
    for (std::size_t c = 0; c < codebooks.size(); ++c) {
        const Matrix& cb = codebooks[c];
        for (std::size_t i = 0; i < cb.rows(); ++i) {
            out << "<circle cx=\"" << detail::svg_num(px(cb(i, opt.axis_x)))
                << "\" cy=\"" << detail::svg_num(py(cb(i, opt.axis_y)))
                << "\" r=\"" << detail::svg_num(opt.centroid_radius)
                << "\" fill=\"" << detail::codebook_color(c)
                << "\" fill-opacity=\"0.85\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace bkmeans

#endif
