#pragma once

// Minimal SVG 1.1 line charts: stacked panels with axes, ticks, legend and
// one polyline per series.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sitmfc/experiments.hpp"

namespace sit {

struct SvgSeries {
    std::string name;
    std::string color = "#1f77b4";
    std::vector<double> x;
    std::vector<double> y;
    /// Draw each point as a vertical stem from zero.
    bool stems = false;
    bool dashed = false;
};

struct SvgPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
};

std::string render_svg(std::string_view title, std::span<const SvgPanel> panels, double width = 860.0,
                       double panel_height = 240.0);

/// Egg count with its reference, wild males, fertilized females and the
/// sterile stock, one panel each.
std::string states_svg(const RunResult& result, std::string_view title);
/// Continuous command V against the sterile stock x4.
std::string control_continuous_svg(const RunResult& result, std::string_view title);
/// Release amplitudes as stems.
std::string control_impulse_svg(const RunResult& result, std::string_view title);

}  // namespace sit
