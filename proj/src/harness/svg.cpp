#include "wcbo/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcbo/harness/io.hpp"

namespace wcbo::harness {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-300) {
            const double pad = std::max(1.0, std::abs(lo)) * 0.5;
            lo -= pad;
            hi += pad;
        }
    }
};

std::string num(double v) { return format_svg_number(v); }

}  // namespace

std::string xml_escape(const std::string& s) {
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

const std::string& palette(std::size_t i) {
    static const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return colors[i % colors.size()];
}

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

std::string SvgPlot::render() const {
    auto ty = [this](double v) {
        if (!log_y_) return v;
        return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
    };
    Range xr, yr;
    for (const auto& l : lines_) {
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
            if (!std::isfinite(ty(l.y[i]))) continue;
            xr.include(l.x[i]);
            yr.include(ty(l.y[i]));
        }
    }
    for (const auto& b : bands_) {
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            xr.include(b.x[i]);
            yr.include(ty(b.lower[i]));
            yr.include(ty(b.upper[i]));
        }
    }
    xr.finish();
    yr.finish();
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         xml_escape(title_) + "</text>\n";

    for (const auto& b : bands_) {
        std::string pts;
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            const double y = ty(b.upper[i]);
            if (std::isfinite(y)) pts += num(px(b.x[i])) + "," + num(py(y)) + " ";
        }
        for (std::size_t i = b.x.size(); i-- > 0;) {
            const double y = ty(b.lower[i]);
            if (std::isfinite(y)) pts += num(px(b.x[i])) + "," + num(py(y)) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        s += "<polygon points=\"" + pts + "\" fill=\"" + b.color + "\" fill-opacity=\"" + num(b.opacity) +
             "\" stroke=\"none\"/>\n";
    }
    for (const auto& l : lines_) {
        std::string pts;
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
            const double y = ty(l.y[i]);
            if (std::isfinite(y)) pts += num(px(l.x[i])) + "," + num(py(y)) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\"";
        if (l.dashed) s += " stroke-dasharray=\"5,3\"";
        s += "/>\n";
    }

    // axes
    const double x0 = kLeft, x1 = kLeft + pw, y0 = kTop + ph;
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y0) +
         "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        s += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px(xv)) + "\" y2=\"" +
             num(y0 + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\" font-size=\"11\">" +
             num(xv) + "</text>\n";
        s += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(x0) + "\" y2=\"" +
             num(py(yv)) + "\" stroke=\"black\"/>\n";
        const std::string ylab = log_y_ ? "1e" + num(yv) : num(yv);
        s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
             xml_escape(ylab) + "</text>\n";
    }
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xml_escape(xlabel_) + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + xml_escape(ylabel_) + "</text>\n";

    double ly = kTop + 10;
    for (const auto& l : lines_) {
        if (l.label.empty()) continue;
        s += "<line x1=\"" + num(x1 + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(x1 + 36) + "\" y2=\"" + num(ly) +
             "\" stroke=\"" + l.color + "\" stroke-width=\"1.5\"";
        if (l.dashed) s += " stroke-dasharray=\"5,3\"";
        s += "/>\n";
        s += "<text x=\"" + num(x1 + 42) + "\" y=\"" + num(ly + 4) + "\" font-size=\"11\">" + xml_escape(l.label) +
             "</text>\n";
        ly += 18;
    }
    s += "</svg>\n";
    return s;
}

}  // namespace wcbo::harness
