#pragma once

/**
 * @file svg.hpp
 * @brief Minimal polyline chart rendered straight to SVG text.
 *
 * Output depends only on the data: coordinates are printed with a fixed
 * number of decimals and series keep their insertion order.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qmod::svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = false;
};

struct Axis {
    std::string label;
    bool log_scale = false;
};

inline std::string escape(const std::string& text) {
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

inline std::string fixed(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

class LineChart {
public:
    LineChart(std::string title, Axis x, Axis y) : title_(std::move(title)), x_(std::move(x)), y_(std::move(y)) {}

    void add(Series s) { series_.push_back(std::move(s)); }
    bool empty() const { return series_.empty(); }

    std::string render() const {
        constexpr double kWidth = 720.0;
        constexpr double kHeight = 480.0;
        constexpr double kLeft = 80.0;
        constexpr double kRight = 190.0;
        constexpr double kTop = 40.0;
        constexpr double kBottom = 60.0;
        const double plot_w = kWidth - kLeft - kRight;
        const double plot_h = kHeight - kTop - kBottom;

        auto [x_lo, x_hi] = range(true);
        auto [y_lo, y_hi] = range(false);
        auto sx = [&](double v) { return kLeft + (transform(v, x_) - x_lo) / (x_hi - x_lo) * plot_w; };
        auto sy = [&](double v) { return kTop + plot_h - (transform(v, y_) - y_lo) / (y_hi - y_lo) * plot_h; };

        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
               fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) + "\">\n";
        out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"15\">" + escape(title_) + "</text>\n";
        out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(plot_w) + "\" height=\"" +
               fixed(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";

        for (double t : ticks(x_lo, x_hi, x_)) {
            const double px = kLeft + (t - x_lo) / (x_hi - x_lo) * plot_w;
            out += "<line x1=\"" + fixed(px) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" + fixed(px) +
                   "\" y2=\"" + fixed(kTop + plot_h + 5) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + fixed(px) + "\" y=\"" + fixed(kTop + plot_h + 20) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                   tick_label(untransform(t, x_)) + "</text>\n";
        }
        for (double t : ticks(y_lo, y_hi, y_)) {
            const double py = kTop + plot_h - (t - y_lo) / (y_hi - y_lo) * plot_h;
            out += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(py) + "\" x2=\"" + fixed(kLeft) +
                   "\" y2=\"" + fixed(py) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(py + 4) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
                   tick_label(untransform(t, y_)) + "</text>\n";
        }
        out += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape(x_.label + (x_.log_scale ? " (log)" : "")) + "</text>\n";
        out += "<text x=\"18\" y=\"" + fixed(kTop + plot_h / 2) + "\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 " + fixed(kTop + plot_h / 2) +
               ")\">" + escape(y_.label + (y_.log_scale ? " (log)" : "")) + "</text>\n";

        double legend_y = kTop + 10;
        for (const auto& s : series_) {
            std::string pts;
            for (const auto& [x, y] : s.points) {
                if (!plottable(x, x_) || !plottable(y, y_)) {
                    continue;
                }
                if (!pts.empty()) {
                    pts += ' ';
                }
                pts += fixed(sx(x)) + "," + fixed(sy(y));
            }
            const std::string dash = s.dashed ? " stroke-dasharray=\"6 4\"" : "";
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\"" + dash + " points=\"" + pts +
                   "\"/>\n";
            if (s.markers) {
                for (const auto& [x, y] : s.points) {
                    if (plottable(x, x_) && plottable(y, y_)) {
                        out += "<circle cx=\"" + fixed(sx(x)) + "\" cy=\"" + fixed(sy(y)) + "\" r=\"2.5\" fill=\"" +
                               s.color + "\"/>\n";
                    }
                }
            }
            const double lx = kLeft + plot_w + 12;
            out += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(legend_y) + "\" x2=\"" + fixed(lx + 24) +
                   "\" y2=\"" + fixed(legend_y) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" + dash + "/>\n";
            out += "<text x=\"" + fixed(lx + 30) + "\" y=\"" + fixed(legend_y + 4) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.name) + "</text>\n";
            legend_y += 18;
        }
        out += "</svg>\n";
        return out;
    }

private:
    static bool plottable(double v, const Axis& a) { return std::isfinite(v) && (!a.log_scale || v > 0.0); }
    static double transform(double v, const Axis& a) { return a.log_scale ? std::log10(v) : v; }
    static double untransform(double v, const Axis& a) { return a.log_scale ? std::pow(10.0, v) : v; }

    std::pair<double, double> range(bool is_x) const {
        const Axis& a = is_x ? x_ : y_;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& s : series_) {
            for (const auto& pt : s.points) {
                const double v = is_x ? pt.first : pt.second;
                if (plottable(v, a)) {
                    lo = std::min(lo, transform(v, a));
                    hi = std::max(hi, transform(v, a));
                }
            }
        }
        if (!(lo <= hi)) {
            return {0.0, 1.0};
        }
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            const double pad = std::max(0.5, 0.05 * std::abs(hi));
            return {lo - pad, hi + pad};
        }
        const double pad = 0.04 * (hi - lo);
        return {lo - pad, hi + pad};
    }

    // Ticks in transformed coordinates.
    static std::vector<double> ticks(double lo, double hi, const Axis& a) {
        std::vector<double> out;
        if (a.log_scale) {
            const double step = std::max(1.0, std::ceil((hi - lo) / 8.0));
            for (double t = std::ceil(lo); t <= hi; t += step) {
                out.push_back(t);
            }
            return out;
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
            out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
        }
        return out;
    }

    std::string title_;
    Axis x_;
    Axis y_;
    std::vector<Series> series_;
};

} // namespace qmod::svg
