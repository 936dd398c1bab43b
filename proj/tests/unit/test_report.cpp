#include <doctest.h>

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sitmfc/experiments.hpp"
#include "sitmfc/format.hpp"
#include "sitmfc/report.hpp"
#include "sitmfc/svg.hpp"

using namespace sit;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::size_t count(const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

// Crude well-formedness check: every opened element closes in order.
bool balanced_xml(const std::string& s) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while ((i = s.find('<', i)) != std::string::npos) {
        const auto j = s.find('>', i);
        if (j == std::string::npos) return false;
        std::string tag = s.substr(i + 1, j - i - 1);
        i = j + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag[0] == '/') {
            const auto name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (tag.back() != '/') {
            stack.push_back(tag.substr(0, tag.find_first_of(" \n")));
        }
    }
    return stack.empty();
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = d(g) * std::pow(10.0, i % 20 - 10);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(5.0) == "5");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("trajectory and pulse CSV layout") {
    const RunResult r = run_scenario(nominal_scenario());
    std::ostringstream t;
    write_trajectory_csv(t, r);
    const auto tl = lines(t.str());
    CHECK(tl.front() == "day,x1,x2,x3,x4,y_ref,y_ref_dot,v_continuous,f_est,error");
    CHECK(tl.size() == r.trajectory.size() + 1);
    CHECK(t.str().find('\r') == std::string::npos);
    for (const auto& l : tl) CHECK(count(l, ",") == 9);
    CHECK(tl[1].rfind("0,", 0) == 0);

    std::ostringstream p;
    write_pulses_csv(p, r.pulses);
    const auto pl = lines(p.str());
    CHECK(pl.front() == "day,amplitude");
    CHECK(pl.size() == r.pulses.size() + 1);
    CHECK(pl[2].rfind("3,", 0) == 0);
}

TEST_CASE("summary CSV has matching header and row widths") {
    const Scenario s = nominal_scenario();
    const RunResult r = run_scenario(s);
    std::ostringstream o;
    write_summary_csv(o, s, r, 444.0);
    const auto l = lines(o.str());
    REQUIRE(l.size() == 2);
    CHECK(count(l[0], ",") == count(l[1], ","));
    CHECK(l[1].substr(l[1].rfind(',') + 1) == "444");
}

TEST_CASE("Monte Carlo CSV rows and aggregate") {
    MonteCarloConfig mc;
    mc.n_runs = 3;
    const auto summary = run_monte_carlo(mc, nominal_scenario());
    std::ostringstream o;
    write_mc_summary_csv(o, mc, summary);
    const auto l = lines(o.str());
    REQUIRE(l.size() == 5);
    CHECK(l[0] == "run_id,seed,I1,I2,I3,I4,I5,I6,I7,I8,rmse,total_released,saturation_count,success");
    CHECK(l[1].rfind("0,", 0) == 0);
    CHECK(l[4].rfind("aggregate,42,", 0) == 0);
    CHECK(l[4].substr(l[4].rfind(',') + 1) == std::to_string(summary.success_count));
    for (const auto& row : l) CHECK(count(row, ",") == 13);
}

TEST_CASE("SVG figures are well formed with one polyline per series") {
    const RunResult r = run_scenario(nominal_scenario());
    const std::string states = states_svg(r, "a <b> & c");
    CHECK(balanced_xml(states));
    CHECK(count(states, "<polyline") == 5);
    CHECK(states.find("a &lt;b&gt; &amp; c") != std::string::npos);
    CHECK(count(control_continuous_svg(r, "x"), "<polyline") == 2);
    const std::string imp = control_impulse_svg(r, "x");
    CHECK(balanced_xml(imp));
    CHECK(count(imp, "<polyline") == 1);
    CHECK(imp.rfind("<?xml", 0) == 0);
}

TEST_CASE("SVG handles empty and constant series") {
    const SvgPanel p{"t", "x", "y", {{"flat", "#000", {0, 1, 2}, {5, 5, 5}}, {"empty", "#111", {}, {}}}};
    const std::string s = render_svg("t", std::span(&p, 1));
    CHECK(balanced_xml(s));
    CHECK(count(s, "<polyline") == 2);
    CHECK(s.find("nan") == std::string::npos);
}
