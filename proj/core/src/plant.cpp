#include "sitmfc/plant.hpp"

#include <cmath>
#include <string>

#include "sitmfc/error.hpp"

namespace sit {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParams(std::string("model parameter ") + name + " must be finite and > 0, got " +
                            std::to_string(v));
    }
}

}  // namespace

void ModelParams::validate() const {
    require_positive(beta_E, "beta_E");
    require_positive(cap_K, "cap_K");
    require_positive(nu_E, "nu_E");
    require_positive(delta_E, "delta_E");
    require_positive(delta_M, "delta_M");
    require_positive(delta_F, "delta_F");
    require_positive(delta_S, "delta_S");
    if (!(nu > 0.0 && nu < 1.0)) {
        throw InvalidParams("model parameter nu must lie in (0, 1), got " + std::to_string(nu));
    }
    if (!(gamma_S >= 0.0) || !std::isfinite(gamma_S)) {
        throw InvalidParams("model parameter gamma_S must be finite and >= 0, got " + std::to_string(gamma_S));
    }
}

double ModelParams::extinction_ratio() const {
    return (nu_E + delta_E) * delta_M * delta_F / (beta_E * nu * (1.0 - nu) * nu_E * nu_E);
}

bool SystemState::finite() const {
    return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3) && std::isfinite(x4);
}

void SimGrid::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParams("grid step h must be > 0");
    if (!(t_end > t0)) throw InvalidParams("grid t_end must exceed t0");
    if (!(sample_every > 0.0)) throw InvalidParams("grid sample_every must be > 0");
    const double ratio = sample_every / h;
    if (std::abs(ratio - std::round(ratio)) > 1e-12 * ratio || std::round(ratio) < 1.0) {
        throw InvalidParams("grid sample_every must be an integer multiple of h");
    }
}

std::size_t SimGrid::steps_per_sample() const {
    return static_cast<std::size_t>(std::llround(sample_every / h));
}

std::size_t SimGrid::sample_count() const {
    return static_cast<std::size_t>(std::floor((t_end - t0) / sample_every + 1e-9));
}

StateDerivative derivatives(const SystemState& s, const ModelParams& p, double u) {
    if (!s.finite() || !std::isfinite(u)) {
        throw InvalidState("derivatives: non-finite state or control input");
    }
    const double mating_pool = s.x1 + p.gamma_S * s.x4;
    // Removable singularity: with no eggs and no sterile males there is no
    // female production.
    const double production = mating_pool > 0.0 ? p.nu * p.nu_E * s.x1 * s.x2 / mating_pool : 0.0;
    return {
        p.beta_E * s.x3 * (1.0 - s.x1 / p.cap_K) - (p.nu_E + p.delta_E) * s.x1,
        (1.0 - p.nu) * p.nu_E * s.x1 - p.delta_M * s.x2,
        production - p.delta_F * s.x3,
        u - p.delta_S * s.x4,
    };
}

SystemState step_rk4(const SystemState& state, const ModelParams& params, const ControlSignal& u_fn, double t,
                     double h, IntegratorStats* stats) {
    auto shifted = [&](const StateDerivative& k, double scale) {
        return SystemState{state.x1 + scale * k[0], state.x2 + scale * k[1], state.x3 + scale * k[2],
                           state.x4 + scale * k[3]};
    };
    const double u0 = u_fn ? u_fn(t) : 0.0;
    const double um = u_fn ? u_fn(t + 0.5 * h) : 0.0;
    const double u1 = u_fn ? u_fn(t + h) : 0.0;

    // Stage states that overflow are a blow-up of this step, not bad input.
    auto stage = [&](const SystemState& x, double u) {
        if (!x.finite()) throw IntegrationBlowup(t, "integration blow-up at t=" + std::to_string(t));
        return derivatives(x, params, u);
    };
    const StateDerivative k1 = derivatives(state, params, u0);
    const StateDerivative k2 = stage(shifted(k1, 0.5 * h), um);
    const StateDerivative k3 = stage(shifted(k2, 0.5 * h), um);
    const StateDerivative k4 = stage(shifted(k3, h), u1);

    std::array<double, 4> next = state.as_array();
    bool clamped = false;
    for (std::size_t i = 0; i < 4; ++i) {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(next[i])) {
            throw IntegrationBlowup(t, "integration blow-up at t=" + std::to_string(t));
        }
        if (next[i] < 0.0) {
            next[i] = 0.0;
            clamped = true;
        }
    }
    if (stats) {
        ++stats->steps;
        if (clamped) ++stats->clamp_events;
    }
    return SystemState::from_array(next);
}

SystemState integrate(SystemState state, const ModelParams& params, const ControlSignal& u_fn, double t, double h,
                      std::size_t n, IntegratorStats* stats) {
    for (std::size_t i = 0; i < n; ++i) {
        state = step_rk4(state, params, u_fn, t + static_cast<double>(i) * h, h, stats);
    }
    return state;
}

SystemState apply_pulse(const SystemState& state, double amplitude) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw InvalidPulse("pulse amplitude must be finite and >= 0, got " + std::to_string(amplitude));
    }
    SystemState out = state;
    out.x4 += amplitude;
    return out;
}

Equilibrium wild_equilibrium(const ModelParams& p) {
    p.validate();
    const double survival = 1.0 - p.extinction_ratio();
    if (!(survival > 0.0)) return {SystemState{}, true};
    SystemState s;
    s.x1 = p.cap_K * survival;
    s.x2 = (1.0 - p.nu) * p.nu_E * s.x1 / p.delta_M;
    s.x3 = p.nu * p.nu_E * s.x2 / p.delta_F;
    s.x4 = 0.0;
    return {s, false};
}

}  // namespace sit
