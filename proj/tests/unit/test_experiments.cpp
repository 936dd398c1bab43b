#include <doctest.h>

#include <cmath>
#include <set>

#include "sitmfc/error.hpp"
#include "sitmfc/experiments.hpp"
#include "sitmfc/rng.hpp"

using namespace sit;

TEST_CASE("splitmix64 reference values") {
    // Published first outputs of the splitmix64 sequence seeded with 0.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("random streams are reproducible and bounded") {
    RandomStream a(child_seed(42, 3));
    RandomStream b(child_seed(42, 3));
    for (int i = 0; i < 1000; ++i) {
        const double x = a.uniform(0.7, 1.3);
        CHECK(x == b.uniform(0.7, 1.3));
        CHECK(x >= 0.7);
        CHECK(x < 1.3);
    }
    CHECK(RandomStream(1).uniform(2.0, 2.0) == 2.0);
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(child_seed(42, i));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("metrics over aligned series") {
    const std::vector<SystemState> states{{10, 0, 0, 5}, {12, 0, 0, 6}, {7, 0, 0, 1}};
    const std::vector<ReferencePoint> refs{{10, 0}, {10, 0}, {10, 0}};
    const std::vector<double> v{5, 4, 3};
    PulseTrain p;
    p.append({0, 3.0, 3.0});
    p.append({3, 2.0, 9.0});
    const auto m = compute_metrics(states, refs, p, v, 3.0);
    CHECK(m.rmse_tracking == doctest::Approx(std::sqrt((0.0 + 4.0 + 9.0) / 3.0)));
    CHECK(m.max_abs_error == 3.0);
    CHECK(m.reconstruction_error == doctest::Approx((0.0 + 2.0 + 2.0) / 3.0));
    CHECK(m.total_released == 5.0);
    CHECK(m.saturation_count == 1);
    CHECK_THROWS_AS(compute_metrics(states, refs, p, std::vector<double>{1.0}, 2.0), AlignmentError);
}

TEST_CASE("alpha probe sees sterile males lowering the egg count") {
    const auto cal = calibrate_alpha(ModelParams{}, SimGrid{});
    CHECK(cal.ok);
    CHECK(cal.alpha < 0.0);
    CHECK(cal.alpha == doctest::Approx(-3.197e-4).epsilon(1e-2));
    ModelParams dead;
    dead.beta_E = 0.1;
    const auto fb = calibrate_alpha(dead, SimGrid{});
    CHECK_FALSE(fb.ok);
    CHECK(fb.alpha == kAlphaFallback);
}

TEST_CASE("nominal scenario tracks and reports consistently") {
    const Scenario s = nominal_scenario();
    const RunResult r = run_scenario(s);
    REQUIRE_FALSE(r.failed);
    CHECK(r.trajectory.size() == 401);
    CHECK(r.pulses.size() == 134);
    CHECK(r.metrics.success);
    CHECK(r.warmup_end == doctest::Approx(s.controller.tau));
    CHECK(r.trajectory.front().ref.y == r.trajectory.front().state.x1);
    CHECK(r.final_tolerance == doctest::Approx(kFinalTolerance * s.reference.y_target));
    // Warm-up rows carry no estimate and no command.
    for (const auto& row : r.trajectory) {
        if (row.day < s.controller.tau) {
            CHECK_FALSE(row.estimator_ready);
            CHECK(row.v_continuous == 0.0);
        }
    }
    // Rows match what compute_metrics reports.
    double sq = 0.0;
    for (const auto& row : r.trajectory) sq += row.error * row.error;
    CHECK(r.metrics.rmse_tracking == doctest::Approx(std::sqrt(sq / 401.0)).epsilon(1e-12));
}

TEST_CASE("runs are deterministic") {
    const Scenario s = mismatch_scenario();
    const RunResult a = run_scenario(s);
    const RunResult b = run_scenario(s);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) CHECK(a.trajectory[i].state == b.trajectory[i].state);
}

TEST_CASE("without releases the decaying reference cannot be tracked") {
    Scenario s = nominal_scenario();
    s.pulse.u_max = 0.0;
    const RunResult r = run_scenario(s);
    CHECK_FALSE(r.metrics.success);
    CHECK(r.metrics.total_released == 0.0);
    CHECK(r.trajectory.back().state.x1 == doctest::Approx(r.trajectory.front().state.x1).epsilon(1e-9));
}

TEST_CASE("scenario validation") {
    Scenario s = nominal_scenario();
    s.grid.sample_every = 0.5;
    CHECK_THROWS_AS(run_scenario(s), InvalidParams);
    s = nominal_scenario();
    s.params_true.delta_S = -0.12;
    CHECK_THROWS_AS(run_scenario(s), InvalidParams);
}

TEST_CASE("perturbation draws multiply only the plant") {
    const MonteCarloConfig mc;
    const Scenario base = nominal_scenario();
    std::vector<double> mult;
    const Scenario s = perturbed_scenario(mc, base, 5, &mult);
    REQUIRE(mult.size() == 8);
    CHECK(s.params_planner == base.params_planner);
    CHECK(s.params_true.gamma_S == base.params_true.gamma_S);
    CHECK(s.seed == child_seed(mc.base_seed, 5));
    for (std::size_t i = 0; i < mult.size(); ++i) {
        CHECK(mult[i] >= 0.7);
        CHECK(mult[i] <= 1.3);
        const ModelParam p = mc.perturbed[i];
        CHECK(param_value(s.params_true, p) == param_value(base.params_true, p) * mult[i]);
    }
}

TEST_CASE("model parameter names round-trip") {
    for (auto p : {ModelParam::beta_E, ModelParam::cap_K, ModelParam::nu_E, ModelParam::delta_E, ModelParam::nu,
                   ModelParam::delta_M, ModelParam::gamma_S, ModelParam::delta_F, ModelParam::delta_S}) {
        CHECK(parse_model_param(to_string(p)) == p);
    }
    CHECK_FALSE(parse_model_param("K"));
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
    MonteCarloConfig mc;
    mc.n_runs = 12;
    const Scenario base = nominal_scenario();
    mc.threads = 1;
    const auto serial = run_monte_carlo(mc, base);
    mc.threads = 5;
    const auto parallel = run_monte_carlo(mc, base);
    CHECK(serial.success_count == parallel.success_count);
    for (std::size_t i = 0; i < serial.runs.size(); ++i) {
        CHECK(serial.runs[i].run_id == static_cast<int>(i));
        CHECK(serial.runs[i].multipliers == parallel.runs[i].multipliers);
        CHECK(serial.runs[i].metrics.rmse_tracking == parallel.runs[i].metrics.rmse_tracking);
    }
}

TEST_CASE("a single campaign run equals the replayed scenario") {
    MonteCarloConfig mc;
    mc.n_runs = 1;
    const Scenario base = nominal_scenario();
    const auto summary = run_monte_carlo(mc, base);
    const RunResult r = run_scenario(perturbed_scenario(mc, base, 0));
    CHECK(summary.runs[0].metrics.rmse_tracking == r.metrics.rmse_tracking);
    CHECK(summary.runs[0].metrics.total_released == r.metrics.total_released);
    CHECK(summary.runs[0].metrics.success == r.metrics.success);
}

TEST_CASE("campaign config validation") {
    MonteCarloConfig mc;
    mc.n_runs = 0;
    CHECK_THROWS_AS(mc.validate(), InvalidParams);
    mc = MonteCarloConfig{};
    mc.lo = 1.5;
    CHECK_THROWS_AS(mc.validate(), InvalidParams);
}
