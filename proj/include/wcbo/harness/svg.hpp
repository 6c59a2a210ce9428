#pragma once

#include <string>
#include <vector>

namespace wcbo::harness {

struct SvgLine {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct SvgBand {
    std::vector<double> x;
    std::vector<double> lower;
    std::vector<double> upper;
    std::string color = "#1f77b4";
    double opacity = 0.2;
};

/// Minimal static line plot: shaded bands, polylines, axes with ticks and a
/// legend. Numbers are printed with 9 significant digits.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel);

    void add_line(SvgLine line) { lines_.push_back(std::move(line)); }
    void add_band(SvgBand band) { bands_.push_back(std::move(band)); }
    /// Plots log10(y); non-positive values are dropped.
    void set_log_y(bool on) { log_y_ = on; }

    std::string render() const;

private:
    std::string title_;
    std::string xlabel_;
    std::string ylabel_;
    bool log_y_ = false;
    std::vector<SvgLine> lines_;
    std::vector<SvgBand> bands_;
};

std::string xml_escape(const std::string& s);

/// Color i of a fixed palette.
const std::string& palette(std::size_t i);

}  // namespace wcbo::harness
