#include "sitmfc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sitmfc/error.hpp"
#include "sitmfc/rng.hpp"

namespace sit {

void Scenario::validate() const {
    params_true.validate();
    params_planner.validate();
    controller.validate();
    pulse.validate();
    reference.validate();
    grid.validate();
    if (std::abs(grid.sample_every - 1.0) > 1e-12) {
        throw InvalidParams("scenario grid sample_every must be 1 day (the controller runs daily)");
    }
    if (epi) epi->validate();
}

RunMetrics compute_metrics(std::span<const SystemState> states, std::span<const ReferencePoint> ref,
                           const PulseTrain& pulses, std::span<const double> v_trace, double u_max) {
    if (states.size() != ref.size() || states.size() != v_trace.size()) {
        throw AlignmentError("compute_metrics: states, reference and command series differ in length");
    }
    RunMetrics m;
    if (!states.empty()) {
        double sq = 0.0;
        double recon = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double e = states[i].x1 - ref[i].y;
            sq += e * e;
            m.max_abs_error = std::max(m.max_abs_error, std::abs(e));
            recon += std::abs(states[i].x4 - v_trace[i]);
        }
        const auto n = static_cast<double>(states.size());
        m.rmse_tracking = std::sqrt(sq / n);
        m.reconstruction_error = recon / n;
    }
    m.total_released = pulses.total_released();
    m.saturation_count = pulses.saturation_count(u_max);
    return m;
}

RunResult run_scenario(const Scenario& s) {
    s.validate();
    RunResult out;

    SystemState x = wild_equilibrium(s.params_true).state;
    ReferenceTrajectory ref_def = s.reference;
    if (s.reference_from_initial_output) ref_def.y_start = x.x1;

    const std::size_t n_samples = s.grid.sample_count();
    const std::size_t steps = s.grid.steps_per_sample();
    const int J = s.pulse.period_J;
    const double delta_S_plan = s.pulse.delta_S_nominal;

    SampleWindow window(s.controller.tau);
    double v = 0.0;
    const ControlSignal no_release;  // releases are impulsive
    out.trajectory.reserve(n_samples + 1);

    try {
        for (std::size_t k = 0; k <= n_samples; ++k) {
            const auto day = static_cast<std::int64_t>(k);
            const double t = s.grid.t0 + static_cast<double>(k) * s.grid.sample_every;

            // The estimator sees the stock implied by the releases made so
            // far, under the planner's decay rate.
            window.push({t, x.x1, out.pulses.stock_at(t, delta_S_plan)});
            const ReferencePoint r = reference(t - s.grid.t0, ref_def);
            const auto f = f_estimate(window, s.controller.alpha, s.controller.tau);

            TrajectoryRow row;
            row.day = t;
            row.state = x;
            row.ref = r;
            row.error = x.x1 - r.y;
            if (f) {
                if (!out.warmup_end) out.warmup_end = t;
                v = ip_control(*f, x.x1, r.y, r.y_dot, s.controller);
                row.f_est = *f;
                row.estimator_ready = true;
            } else {
                v = std::max(v, 0.0);
            }
            row.v_continuous = v;
            out.trajectory.push_back(row);

            if (is_release_day(day, J)) {
                out.pulses = plan_step(v, std::move(out.pulses), day, s.pulse);
                x = apply_pulse(x, out.pulses.pulses().back().amplitude);
            }
            if (k < n_samples) x = integrate(x, s.params_true, no_release, t, s.grid.h, steps, &out.integrator);
        }
    } catch (const IntegrationBlowup& e) {
        out.failed = true;
        out.failure = e.what();
    }

    std::vector<SystemState> states;
    std::vector<ReferencePoint> refs;
    std::vector<double> vs;
    states.reserve(out.trajectory.size());
    refs.reserve(out.trajectory.size());
    vs.reserve(out.trajectory.size());
    for (const auto& row : out.trajectory) {
        states.push_back(row.state);
        refs.push_back(row.ref);
        vs.push_back(row.v_continuous);
    }
    out.metrics = compute_metrics(states, refs, out.pulses, vs, s.pulse.u_max);

    if (!out.trajectory.empty()) {
        const auto& last = out.trajectory.back();
        out.final_error = std::abs(last.error);
        out.final_tolerance = kFinalTolerance * std::abs(last.ref.y);
    }

    std::size_t active = 0;
    std::size_t active_saturated = 0;
    for (const auto& p : out.pulses.pulses()) {
        if (!out.warmup_end || static_cast<double>(p.day) < *out.warmup_end) continue;
        ++active;
        if (p.saturated(s.pulse.u_max)) ++active_saturated;
    }
    out.all_active_saturated = active > 0 && active_saturated == active;
    out.metrics.success = !out.failed && out.final_error <= out.final_tolerance && !out.all_active_saturated;
    return out;
}

AlphaCalibration calibrate_alpha(const ModelParams& params, const SimGrid& grid, double probe_stock,
                                 double probe_days) {
    params.validate();
    const auto eq = wild_equilibrium(params);
    if (eq.extinct || !(probe_stock > 0.0) || !(probe_days > 0.0)) return {kAlphaFallback, false};

    SystemState x = eq.state;
    x.x4 = probe_stock;
    // Constant inflow that keeps the sterile stock at probe_stock.
    const double inflow = params.delta_S * probe_stock;
    const ControlSignal hold = [inflow](double) { return inflow; };
    const auto n = static_cast<std::size_t>(std::llround(probe_days / grid.h));
    const SystemState end = integrate(x, params, hold, 0.0, grid.h, n);

    const double slope = (end.x1 - eq.state.x1) / (static_cast<double>(n) * grid.h);
    const double alpha = slope / probe_stock;
    if (!std::isfinite(alpha) || std::abs(slope) < 1e-9 * params.cap_K) return {kAlphaFallback, false};
    return {alpha, true};
}

std::string_view to_string(ModelParam p) {
    switch (p) {
        case ModelParam::beta_E: return "beta_E";
        case ModelParam::cap_K: return "cap_K";
        case ModelParam::nu_E: return "nu_E";
        case ModelParam::delta_E: return "delta_E";
        case ModelParam::nu: return "nu";
        case ModelParam::delta_M: return "delta_M";
        case ModelParam::gamma_S: return "gamma_S";
        case ModelParam::delta_F: return "delta_F";
        case ModelParam::delta_S: return "delta_S";
    }
    return "?";
}

std::optional<ModelParam> parse_model_param(std::string_view s) {
    for (auto p : {ModelParam::beta_E, ModelParam::cap_K, ModelParam::nu_E, ModelParam::delta_E, ModelParam::nu,
                   ModelParam::delta_M, ModelParam::gamma_S, ModelParam::delta_F, ModelParam::delta_S}) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

double& param_ref(ModelParams& m, ModelParam p) {
    switch (p) {
        case ModelParam::beta_E: return m.beta_E;
        case ModelParam::cap_K: return m.cap_K;
        case ModelParam::nu_E: return m.nu_E;
        case ModelParam::delta_E: return m.delta_E;
        case ModelParam::nu: return m.nu;
        case ModelParam::delta_M: return m.delta_M;
        case ModelParam::gamma_S: return m.gamma_S;
        case ModelParam::delta_F: return m.delta_F;
        case ModelParam::delta_S: return m.delta_S;
    }
    throw InvalidParams("unknown model parameter");
}

double param_value(const ModelParams& m, ModelParam p) { return param_ref(const_cast<ModelParams&>(m), p); }

void MonteCarloConfig::validate() const {
    if (n_runs < 1) throw InvalidParams("montecarlo n_runs must be >= 1");
    if (!(lo > 0.0 && lo <= hi) || !std::isfinite(hi)) throw InvalidParams("montecarlo requires 0 < lo <= hi");
}

Scenario perturbed_scenario(const MonteCarloConfig& mc, const Scenario& base, int index,
                            std::vector<double>* multipliers) {
    Scenario s = base;
    s.seed = child_seed(mc.base_seed, static_cast<std::uint64_t>(index));
    s.name = base.name + "#" + std::to_string(index);
    RandomStream rng(s.seed);
    if (multipliers) multipliers->clear();
    for (ModelParam p : mc.perturbed) {
        const double m = rng.uniform(mc.lo, mc.hi);
        param_ref(s.params_true, p) *= m;
        if (multipliers) multipliers->push_back(m);
    }
    return s;
}

MonteCarloSummary run_monte_carlo(const MonteCarloConfig& mc, const Scenario& base) {
    mc.validate();
    base.validate();
    MonteCarloSummary summary;
    summary.runs.resize(static_cast<std::size_t>(mc.n_runs));

    auto run_one = [&](int i) {
        MonteCarloRun& r = summary.runs[static_cast<std::size_t>(i)];
        r.run_id = i;
        Scenario s;
        try {
            s = perturbed_scenario(mc, base, i, &r.multipliers);
            r.seed = s.seed;
            r.params_true = s.params_true;
            r.params_planner = s.params_planner;
            const RunResult res = run_scenario(s);
            r.metrics = res.metrics;
            r.all_active_saturated = res.all_active_saturated;
            r.final_error = res.final_error;
            r.failed = res.failed;
            r.failure = res.failure;
        } catch (const std::exception& e) {
            r.failed = true;
            r.failure = e.what();
            r.metrics.success = false;
        }
    };

    unsigned threads = mc.threads ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(mc.n_runs));
    if (threads <= 1) {
        for (int i = 0; i < mc.n_runs; ++i) run_one(i);
    } else {
        // Static interleaved partition; each run writes only its own slot.
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < mc.n_runs; i += static_cast<int>(threads)) run_one(i);
            });
        }
    }

    for (const auto& r : summary.runs) summary.success_count += r.metrics.success ? 1 : 0;
    return summary;
}

Scenario nominal_scenario() {
    Scenario s;
    s.name = "nominal";
    s.grid.t_end = kDefaultHorizonDays;
    s.pulse.delta_S_nominal = s.params_planner.delta_S;
    s.reference.kind = ReferenceKind::smooth_step;
    s.reference.y_start = wild_equilibrium(s.params_true).state.x1;
    s.reference.y_target = kDefaultTargetEggs;
    s.reference.t_settle = kDefaultSettleDays;
    s.controller.k_p = kDefaultKp;
    s.controller.tau = kDefaultTau;
    s.controller.alpha = kDefaultAlphaScale * calibrate_alpha(s.params_planner, s.grid).alpha;
    return s;
}

Scenario j6_scenario() {
    Scenario s = nominal_scenario();
    s.name = "j6";
    s.pulse.period_J = 6;
    return s;
}

Scenario mismatch_scenario() {
    Scenario s = nominal_scenario();
    s.name = "mismatch";
    s.params_true.delta_S = s.params_planner.delta_S * 1.3;
    return s;
}

}  // namespace sit
