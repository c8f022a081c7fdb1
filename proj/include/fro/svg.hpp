#pragma once

// Minimal deterministic SVG line plot of a trajectory.

#include "fro/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace fro::svg {

struct PlotStyle {
    int width = 640;
    int height = 400;
    int margin = 50;
    std::string stroke = "#1f77b4";
    std::string title;
};

namespace detail {
inline std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}
inline std::string label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}
inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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
}  // namespace detail

/// One polyline with a frame, tick labels, and a dashed zero line when 0 lies
/// inside the value range.
inline std::string render(const Trajectory& traj, const PlotStyle& style = {}) {
    using detail::fixed;
    using detail::label;
    const double x0 = 0.0;
    const double x1 = traj.size() > 1 ? traj.grid.duration() : 1.0;
    double lo = traj.values.empty() ? 0.0 : *std::min_element(traj.values.begin(), traj.values.end());
    double hi = traj.values.empty() ? 0.0 : *std::max_element(traj.values.begin(), traj.values.end());
    if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }

    const double left = style.margin;
    const double right = style.width - style.margin / 2.0;
    const double top = style.margin / 2.0;
    const double bottom = style.height - style.margin;
    const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
    const auto py = [&](double y) { return bottom - (y - lo) / (hi - lo) * (bottom - top); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" viewBox=\"0 0 " + std::to_string(style.width) + " " +
         std::to_string(style.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        s += "<text x=\"" + fixed(style.width / 2.0) + "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">" +
             detail::escape(style.title) + "</text>\n";
    }
    s += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    s += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(right) + "\" y2=\"" +
         fixed(bottom) + "\"/>\n";
    s += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) + "\" y2=\"" +
         fixed(bottom) + "\"/>\n";
    s += "</g>\n";
    if (lo < 0.0 && hi > 0.0) {
        s += "<line class=\"zero-axis\" x1=\"" + fixed(left) + "\" y1=\"" + fixed(py(0.0)) + "\" x2=\"" +
             fixed(right) + "\" y2=\"" + fixed(py(0.0)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
    s += "<g class=\"ticks\" font-size=\"11\" fill=\"black\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = lo + (hi - lo) * i / 4.0;
        s += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(bottom + 16) + "\" text-anchor=\"middle\">" +
             label(xv) + "</text>\n";
        s += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(py(yv) + 4) + "\" text-anchor=\"end\">" +
             label(yv) + "</text>\n";
    }
    s += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(style.height - 10.0) +
         "\" text-anchor=\"middle\">t</text>\n";
    s += "</g>\n";

    s += "<polyline fill=\"none\" stroke=\"" + detail::escape(style.stroke) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (n) s += ' ';
        s += fixed(px(traj.time(n))) + "," + fixed(py(traj.values[n]));
    }
    s += "\"/>\n</svg>\n";
    return s;
}

}  // namespace fro::svg
