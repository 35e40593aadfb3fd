// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mentionet/degree.hpp"
#include "mentionet/graph.hpp"

namespace mentionet {

// Self-contained SVG output. Renders are pure functions of their inputs:
// integer layout where possible, fixed-precision formatting elsewhere, no
// clocks, no locale.

namespace detail {

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

struct Color {
    int r, g, b;
};

// White-to-deep-blue ramp; t in [0,1].
inline std::string heat_color(double t) {
    static constexpr Color stops[] = {
        {247, 251, 255}, {158, 202, 225}, {66, 146, 198}, {8, 81, 156}, {8, 32, 80}};
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * 4.0;
    const int lo = std::min(3, static_cast<int>(scaled));
    const double f = scaled - lo;
    const auto lerp = [&](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", lerp(stops[lo].r, stops[lo + 1].r),
                  lerp(stops[lo].g, stops[lo + 1].g), lerp(stops[lo].b, stops[lo + 1].b));
    return buf;
}

inline void svg_text(std::ostream& os, double x, double y, const std::string& s,
                     const char* anchor = "start", int size = 11) {
    os << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y) << "\" font-size=\"" << size
       << "\" font-family=\"monospace\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
}

} // namespace detail

/// Adjacency heatmap: one cell per non-zero entry, color mapped by
/// log1p(weight) when log_scale (zero weights stay background) or linearly
/// otherwise, plus a color bar for the weight scale.
inline void render_matrix(const AdjacencyMatrix& matrix, bool log_scale, std::ostream& os,
                          const std::string& title = {}) {
    if (matrix.n == 0) throw std::invalid_argument("render_matrix: zero-size matrix");

    const std::size_t n = matrix.n;
    const int cell = static_cast<int>(std::clamp<std::size_t>(800 / n, 1, 24));
    const int left = 50, top = 46, bar_gap = 24, bar_w = 18, right = 70, bottom = 36;
    const int grid = static_cast<int>(n) * cell;
    const int width = left + grid + bar_gap + bar_w + right;
    const int height = top + grid + bottom;

    const std::uint64_t max_w = matrix.max_value();
    const double denom = log_scale ? std::log1p(static_cast<double>(max_w))
                                   : static_cast<double>(max_w);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) detail::svg_text(os, left, 20, title, "start", 14);
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << grid << "\" height=\"" << grid
       << "\" fill=\"#f5f5f5\" stroke=\"#999999\"/>\n";

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t w = matrix.at(i, j);
            if (w == 0) continue;
            const double t = denom > 0
                                 ? (log_scale ? std::log1p(static_cast<double>(w)) : static_cast<double>(w)) / denom
                                 : 1.0;
            os << "<rect class=\"cell\" x=\"" << left + static_cast<int>(j) * cell << "\" y=\""
               << top + static_cast<int>(i) * cell << "\" width=\"" << cell << "\" height=\"" << cell
               << "\" fill=\"" << detail::heat_color(t) << "\"/>\n";
        }
    }

    detail::svg_text(os, left + grid / 2.0, top + grid + 24, "targets (columns)", "middle");
    os << "<text x=\"" << 16 << "\" y=\"" << top + grid / 2.0
       << "\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << detail::fmt("%.2f", top + grid / 2.0) << ")\">sources (rows)</text>\n";

    // color bar, max at top
    const int bar_x = left + grid + bar_gap;
    const int slices = 48;
    const double slice_h = static_cast<double>(grid) / slices;
    for (int s = 0; s < slices; ++s) {
        const double t = 1.0 - static_cast<double>(s) / (slices - 1);
        os << "<rect x=\"" << bar_x << "\" y=\"" << detail::fmt("%.2f", top + s * slice_h)
           << "\" width=\"" << bar_w << "\" height=\"" << detail::fmt("%.2f", slice_h + 0.5)
           << "\" fill=\"" << detail::heat_color(t) << "\"/>\n";
    }
    os << "<rect x=\"" << bar_x << "\" y=\"" << top << "\" width=\"" << bar_w << "\" height=\"" << grid
       << "\" fill=\"none\" stroke=\"#999999\"/>\n";
    detail::svg_text(os, bar_x + bar_w + 4, top + 10, std::to_string(max_w));
    detail::svg_text(os, bar_x + bar_w + 4, top + grid, "0");
    detail::svg_text(os, bar_x, top - 8, log_scale ? "weight (log1p scale)" : "weight (linear)", "start", 10);
    os << "</svg>\n";
}

/// CCDF scatter of a degree distribution; log-log when flagged, with the
/// fitted tail slope annotated (computed on the fly unless one is passed).
inline void render_degree_plot(const DegreeDistribution& dist, bool log_log, std::ostream& os,
                               const TailEstimate* estimate = nullptr,
                               const std::string& title = {}) {
    if (dist.n_nodes == 0) throw std::invalid_argument("render_degree_plot: empty distribution");

    const auto points = ccdf(dist);
    TailEstimate local;
    if (log_log && estimate == nullptr) {
        local = tail_exponent(dist);
        estimate = &local;
    }

    const int left = 70, right = 24, top = 30, bottom = 52;
    const int plot_w = 560, plot_h = 380;
    const int width = left + plot_w + right, height = top + plot_h + bottom;

    std::uint64_t min_d = 0, max_d = 0;
    double min_p = 1.0;
    bool have = false;
    for (const auto& pt : points) {
        if (log_log && pt.degree == 0) continue; // not placeable on a log axis
        if (!have) {
            min_d = pt.degree;
            have = true;
        }
        max_d = pt.degree;
        min_p = std::min(min_p, pt.p);
    }
    if (!have) throw std::invalid_argument("render_degree_plot: no positive degrees for log-log axes");

    const double x_lo = log_log ? std::log10(static_cast<double>(min_d)) : static_cast<double>(min_d);
    const double x_hi = log_log ? std::log10(static_cast<double>(max_d)) : static_cast<double>(max_d);
    const double y_lo = log_log ? std::log10(std::max(min_p, 1e-12)) : 0.0;
    const double y_hi = log_log ? 0.0 : 1.0; // CCDF starts at 1
    const double x_span = std::max(x_hi - x_lo, 1e-9);
    const double y_span = std::max(y_hi - y_lo, 1e-9);

    const auto px = [&](double x) { return left + (x - x_lo) / x_span * plot_w; };
    const auto py = [&](double y) { return top + (y_hi - y) / y_span * plot_h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) detail::svg_text(os, left, 18, title, "start", 14);
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
       << plot_h << "\" fill=\"#fcfcfc\" stroke=\"#333333\"/>\n";

    char label[64];
    if (log_log) {
        for (int e = static_cast<int>(std::floor(x_lo)); e <= static_cast<int>(std::ceil(x_hi)); ++e) {
            const double x = px(e);
            if (x < left - 0.5 || x > left + plot_w + 0.5) continue;
            os << "<line x1=\"" << detail::fmt("%.2f", x) << "\" y1=\"" << top << "\" x2=\""
               << detail::fmt("%.2f", x) << "\" y2=\"" << top + plot_h << "\" stroke=\"#dddddd\"/>\n";
            std::snprintf(label, sizeof label, "%g", std::pow(10.0, e));
            detail::svg_text(os, x, top + plot_h + 16, label, "middle", 10);
        }
        for (int e = static_cast<int>(std::floor(y_lo)); e <= 0; ++e) {
            const double y = py(e);
            if (y < top - 0.5 || y > top + plot_h + 0.5) continue;
            os << "<line x1=\"" << left << "\" y1=\"" << detail::fmt("%.2f", y) << "\" x2=\""
               << left + plot_w << "\" y2=\"" << detail::fmt("%.2f", y) << "\" stroke=\"#dddddd\"/>\n";
            std::snprintf(label, sizeof label, "%g", std::pow(10.0, e));
            detail::svg_text(os, left - 6, y + 4, label, "end", 10);
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double xv = x_lo + x_span * i / 4.0;
            const double yv = i / 4.0;
            std::snprintf(label, sizeof label, "%.0f", xv);
            detail::svg_text(os, px(xv), top + plot_h + 16, label, "middle", 10);
            std::snprintf(label, sizeof label, "%.2f", yv);
            detail::svg_text(os, left - 6, py(yv) + 4, label, "end", 10);
        }
    }

    for (const auto& pt : points) {
        if (log_log && pt.degree == 0) continue;
        const double x = log_log ? std::log10(static_cast<double>(pt.degree)) : static_cast<double>(pt.degree);
        const double y = log_log ? std::log10(std::max(pt.p, 1e-12)) : pt.p;
        os << "<circle class=\"pt\" cx=\"" << detail::fmt("%.2f", px(x)) << "\" cy=\""
           << detail::fmt("%.2f", py(y)) << "\" r=\"2.5\" fill=\"#08519c\"/>\n";
    }

    std::string x_label = dist.strength ? "strength" : "degree";
    x_label += " ("; x_label += to_string(dist.kind); x_label += ")";
    detail::svg_text(os, left + plot_w / 2.0, height - 14, x_label, "middle");
    os << "<text x=\"18\" y=\"" << top + plot_h / 2.0
       << "\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << detail::fmt("%.2f", top + plot_h / 2.0) << ")\">P(X &gt;= d)</text>\n";

    if (log_log && estimate != nullptr) {
        std::snprintf(label, sizeof label, "alpha = %.3f (xmin = %llu%s)", estimate->exponent,
                      static_cast<unsigned long long>(estimate->xmin),
                      estimate->reliable ? "" : ", unreliable");
        detail::svg_text(os, left + plot_w - 8, top + 18, label, "end", 11);
    }
    os << "</svg>\n";
}

inline void render_matrix_file(const AdjacencyMatrix& matrix, bool log_scale,
                               const std::string& path, const std::string& title = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    render_matrix(matrix, log_scale, out, title);
}

inline void render_degree_plot_file(const DegreeDistribution& dist, bool log_log,
                                    const std::string& path, const TailEstimate* estimate = nullptr,
                                    const std::string& title = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    render_degree_plot(dist, log_log, out, estimate, title);
}

} // namespace mentionet
