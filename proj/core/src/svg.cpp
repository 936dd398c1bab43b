#include "sitmfc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sitmfc/format.hpp"

namespace sit {

namespace {

constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 45.0;
constexpr double kTitleHeight = 30.0;

std::string escape(std::string_view s) {
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

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

std::string px(double v) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(2);
    o << v;
    return o.str();
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

void render_panel(std::ostringstream& o, const SvgPanel& p, double top, double width, double height) {
    Range xr;
    Range yr;
    for (const auto& s : p.series) {
        for (double x : s.x) xr.add(x);
        for (double y : s.y) yr.add(y);
        if (s.stems) yr.add(0.0);
    }
    xr.finish();
    yr.finish();
    const double x_step = nice_step(xr.hi - xr.lo);
    const double y_step = nice_step(yr.hi - yr.lo);
    yr.lo = std::floor(yr.lo / y_step) * y_step;
    yr.hi = std::ceil(yr.hi / y_step) * y_step;

    const double plot_l = kMarginLeft;
    const double plot_r = width - kMarginRight;
    const double plot_t = top + kMarginTop;
    const double plot_b = top + height - kMarginBottom;
    auto sx = [&](double x) { return plot_l + (x - xr.lo) / (xr.hi - xr.lo) * (plot_r - plot_l); };
    auto sy = [&](double y) { return plot_b - (y - yr.lo) / (yr.hi - yr.lo) * (plot_b - plot_t); };

    o << "<g>\n";
    o << "<text x=\"" << px((plot_l + plot_r) / 2) << "\" y=\"" << px(top + 18) << "\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(p.title) << "</text>\n";
    o << "<rect x=\"" << px(plot_l) << "\" y=\"" << px(plot_t) << "\" width=\"" << px(plot_r - plot_l)
      << "\" height=\"" << px(plot_b - plot_t) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (double v = std::ceil(xr.lo / x_step) * x_step; v <= xr.hi + 1e-9 * x_step; v += x_step) {
        o << "<line x1=\"" << px(sx(v)) << "\" y1=\"" << px(plot_b) << "\" x2=\"" << px(sx(v)) << "\" y2=\""
          << px(plot_b + 5) << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << px(sx(v)) << "\" y=\"" << px(plot_b + 18) << "\" text-anchor=\"middle\" "
          << "font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    for (double v = yr.lo; v <= yr.hi + 1e-9 * y_step; v += y_step) {
        o << "<line x1=\"" << px(plot_l - 5) << "\" y1=\"" << px(sy(v)) << "\" x2=\"" << px(plot_r) << "\" y2=\""
          << px(sy(v)) << "\" stroke=\"#ddd\"/>\n";
        o << "<text x=\"" << px(plot_l - 8) << "\" y=\"" << px(sy(v) + 4) << "\" text-anchor=\"end\" "
          << "font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    o << "<text x=\"" << px((plot_l + plot_r) / 2) << "\" y=\"" << px(plot_b + 36) << "\" text-anchor=\"middle\" "
      << "font-size=\"12\">" << escape(p.x_label) << "</text>\n";
    o << "<text transform=\"translate(" << px(16) << "," << px((plot_t + plot_b) / 2) << ") rotate(-90)\" "
      << "text-anchor=\"middle\" font-size=\"12\">" << escape(p.y_label) << "</text>\n";

    for (std::size_t i = 0; i < p.series.size(); ++i) {
        const auto& s = p.series[i];
        o << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\"";
        if (s.dashed) o << " stroke-dasharray=\"6,4\"";
        o << " points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            if (s.stems) {
                o << px(sx(s.x[k])) << ',' << px(sy(0.0)) << ' ' << px(sx(s.x[k])) << ',' << px(sy(s.y[k])) << ' '
                  << px(sx(s.x[k])) << ',' << px(sy(0.0)) << ' ';
            } else {
                o << px(sx(s.x[k])) << ',' << px(sy(s.y[k])) << ' ';
            }
        }
        o << "\"><title>" << escape(s.name) << "</title></polyline>\n";

        const double ly = plot_t + 14 + 18 * static_cast<double>(i);
        o << "<line x1=\"" << px(plot_r + 10) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(plot_r + 30)
          << "\" y2=\"" << px(ly) << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << px(plot_r + 35) << "\" y=\"" << px(ly + 4) << "\" font-size=\"11\">" << escape(s.name)
          << "</text>\n";
    }
    o << "</g>\n";
}

std::vector<double> column(const RunResult& r, double (*get)(const TrajectoryRow&)) {
    std::vector<double> v;
    v.reserve(r.trajectory.size());
    for (const auto& row : r.trajectory) v.push_back(get(row));
    return v;
}

}  // namespace

std::string render_svg(std::string_view title, std::span<const SvgPanel> panels, double width, double panel_height) {
    const double height = kTitleHeight + panel_height * static_cast<double>(panels.size());
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px(width) << "\" height=\""
      << px(height) << "\" viewBox=\"0 0 " << px(width) << ' ' << px(height) << "\" font-family=\"sans-serif\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << px(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
      << "</text>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        render_panel(o, panels[i], kTitleHeight + panel_height * static_cast<double>(i), width, panel_height);
    }
    o << "</svg>\n";
    return o.str();
}

std::string states_svg(const RunResult& r, std::string_view title) {
    const auto day = column(r, [](const TrajectoryRow& t) { return t.day; });
    std::vector<SvgPanel> panels(4);
    panels[0] = {"Eggs", "day", "x1",
                 {{"x1", "#1f77b4", day, column(r, [](const TrajectoryRow& t) { return t.state.x1; })},
                  {"reference", "#d62728", day, column(r, [](const TrajectoryRow& t) { return t.ref.y; }), false,
                   true}}};
    panels[1] = {"Wild males", "day", "x2",
                 {{"x2", "#2ca02c", day, column(r, [](const TrajectoryRow& t) { return t.state.x2; })}}};
    panels[2] = {"Fertilized females", "day", "x3",
                 {{"x3", "#9467bd", day, column(r, [](const TrajectoryRow& t) { return t.state.x3; })}}};
    panels[3] = {"Sterile males", "day", "x4",
                 {{"x4", "#ff7f0e", day, column(r, [](const TrajectoryRow& t) { return t.state.x4; })}}};
    return render_svg(title, panels);
}

std::string control_continuous_svg(const RunResult& r, std::string_view title) {
    const auto day = column(r, [](const TrajectoryRow& t) { return t.day; });
    const SvgPanel panel{"Continuous command", "day", "sterile males",
                         {{"V", "#1f77b4", day, column(r, [](const TrajectoryRow& t) { return t.v_continuous; })},
                          {"x4", "#ff7f0e", day, column(r, [](const TrajectoryRow& t) { return t.state.x4; }),
                           false, true}}};
    return render_svg(title, std::span(&panel, 1));
}

std::string control_impulse_svg(const RunResult& r, std::string_view title) {
    SvgSeries stems{"release", "#2ca02c", {}, {}, true, false};
    for (const auto& p : r.pulses.pulses()) {
        stems.x.push_back(static_cast<double>(p.day));
        stems.y.push_back(p.amplitude);
    }
    const SvgPanel panel{"Impulsive releases", "day", "sterile males released", {stems}};
    return render_svg(title, std::span(&panel, 1));
}

}  // namespace sit
