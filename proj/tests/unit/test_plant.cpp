#include <doctest.h>

#include <cmath>

#include "sitmfc/error.hpp"
#include "sitmfc/plant.hpp"

using namespace sit;

namespace {

// Closed-form wild equilibrium written out independently of the library.
struct Oracle {
    double x1, x2, x3;
};

Oracle equilibrium_oracle(const ModelParams& p) {
    const double r = (p.nu_E + p.delta_E) * p.delta_M * p.delta_F / (p.beta_E * p.nu * (1 - p.nu) * p.nu_E * p.nu_E);
    const double x1 = p.cap_K * (1 - r);
    const double x2 = (1 - p.nu) * p.nu_E * x1 / p.delta_M;
    return {x1, x2, p.nu * p.nu_E * x2 / p.delta_F};
}

}  // namespace

TEST_CASE("nominal parameters validate and persist") {
    const ModelParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.extinction_ratio() == doctest::Approx(0.0512245).epsilon(1e-5));
}

TEST_CASE("validate names the offending field") {
    ModelParams p;
    p.delta_S = -0.1;
    try {
        p.validate();
        FAIL("expected InvalidParams");
    } catch (const InvalidParams& e) {
        CHECK(std::string(e.what()).find("delta_S") != std::string::npos);
    }
    p = ModelParams{};
    p.nu = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidParams);
    p = ModelParams{};
    p.cap_K = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidParams);
}

TEST_CASE("derivatives match a hand evaluation") {
    const ModelParams p;
    const SystemState x{1000.0, 200.0, 300.0, 400.0};
    const auto d = derivatives(x, p, 50.0);
    CHECK(d[0] == doctest::Approx(10 * 300 * (1 - 1000.0 / 22200) - 0.08 * 1000));
    CHECK(d[1] == doctest::Approx(0.51 * 0.05 * 1000 - 0.1 * 200));
    CHECK(d[2] == doctest::Approx(0.49 * 0.05 * 1000 * 200 / (1000 + 400) - 0.04 * 300));
    CHECK(d[3] == doctest::Approx(50 - 0.12 * 400));
}

TEST_CASE("mating term vanishes when the denominator is zero") {
    const ModelParams p;
    const auto d = derivatives({0.0, 10.0, 5.0, 0.0}, p, 0.0);
    CHECK(std::isfinite(d[2]));
    CHECK(d[2] == doctest::Approx(-0.04 * 5));
}

TEST_CASE("wild equilibrium matches the closed form and is stationary") {
    const ModelParams p;
    const auto eq = wild_equilibrium(p);
    const auto o = equilibrium_oracle(p);
    REQUIRE_FALSE(eq.extinct);
    CHECK(eq.state.x1 == doctest::Approx(o.x1).epsilon(1e-12));
    CHECK(eq.state.x2 == doctest::Approx(o.x2).epsilon(1e-12));
    CHECK(eq.state.x3 == doctest::Approx(o.x3).epsilon(1e-12));
    CHECK(eq.state.x4 == 0.0);
    CHECK(eq.state.x1 == doctest::Approx(21063).epsilon(1e-4));
    CHECK(eq.state.x2 == doctest::Approx(5371).epsilon(1e-4));
    CHECK(eq.state.x3 == doctest::Approx(3290).epsilon(1e-4));
    for (double v : derivatives(eq.state, p, 0.0)) CHECK(std::abs(v) < 1e-8 * p.cap_K);
}

TEST_CASE("extinction regime yields the flagged zero state") {
    ModelParams p;
    p.beta_E = 0.1;
    REQUIRE(p.extinction_ratio() >= 1.0);
    const auto eq = wild_equilibrium(p);
    CHECK(eq.extinct);
    CHECK(eq.state == SystemState{});
}

TEST_CASE("RK4 reproduces sterile-stock decay") {
    const ModelParams p;
    const SystemState x{0.0, 0.0, 0.0, 1000.0};
    const ControlSignal none;
    const auto end = integrate(x, p, none, 0.0, 0.01, 1000);
    CHECK(end.x4 == doctest::Approx(1000.0 * std::exp(-0.12 * 10.0)).epsilon(1e-10));
}

TEST_CASE("RK4 with constant inflow approaches u/delta_S") {
    const ModelParams p;
    const ControlSignal u = [](double) { return 60.0; };
    const auto end = integrate({}, p, u, 0.0, 0.01, 5000);
    const double exact = 500.0 * (1.0 - std::exp(-0.12 * 50.0));
    CHECK(end.x4 == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("negative components are clamped and counted") {
    const ModelParams p;
    IntegratorStats stats;
    const ControlSignal none;
    const auto end = integrate({100.0, 10.0, 10.0, -5.0}, p, none, 0.0, 0.01, 10, &stats);
    CHECK(end.x4 == 0.0);
    CHECK(stats.steps == 10);
    CHECK(stats.clamp_events >= 1);
}

TEST_CASE("non-finite inputs and overflow are rejected") {
    const ModelParams p;
    const ControlSignal bad = [](double) { return std::nan(""); };
    CHECK_THROWS_AS(integrate({}, p, bad, 0.0, 0.01, 1), InvalidState);
    const ControlSignal none;
    CHECK_THROWS_AS(integrate({1.0, 1.0, 1e308, 0.0}, p, none, 0.0, 0.01, 1), IntegrationBlowup);
}

TEST_CASE("pulses are instantaneous jumps in the sterile stock") {
    const SystemState x{1, 2, 3, 4};
    const auto y = apply_pulse(x, 10.0);
    CHECK(y == SystemState{1, 2, 3, 14});
    CHECK_THROWS_AS(apply_pulse(x, -1.0), InvalidPulse);
}

TEST_CASE("grid bookkeeping") {
    SimGrid g;
    CHECK(g.steps_per_sample() == 100);
    CHECK(g.sample_count() == 400);
    g.h = 0.03;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = SimGrid{};
    g.t_end = -1;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
}
