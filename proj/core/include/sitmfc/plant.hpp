#pragma once

// Four-compartment mosquito population model with sterile-male releases.
//
//   x1' = beta_E x3 (1 - x1/K) - (nu_E + delta_E) x1        eggs / aquatic phase
//   x2' = (1 - nu) nu_E x1 - delta_M x2                      wild males
//   x3' = nu nu_E x1 x2 / (x1 + gamma_S x4) - delta_F x3     fertilized females
//   x4' = u - delta_S x4                                     sterile males

#include <array>
#include <cstddef>
#include <functional>

namespace sit {

struct ModelParams {
    double beta_E = 10.0;    // egg-laying rate, 1/day
    double cap_K = 22200.0;  // egg carrying capacity
    double nu_E = 0.05;      // aquatic-to-adult transition rate, 1/day
    double delta_E = 0.03;   // aquatic death rate, 1/day
    double nu = 0.49;        // probability of female birth
    double delta_M = 0.1;    // wild-male death rate, 1/day
    double gamma_S = 1.0;    // mating preference for sterile males
    double delta_F = 0.04;   // fertilized-female death rate, 1/day
    double delta_S = 0.12;   // sterile-male death rate, 1/day

    /// Throws InvalidParams naming the first offending field.
    void validate() const;

    /// (nu_E + delta_E) delta_M delta_F / (beta_E nu (1 - nu) nu_E^2).
    /// The wild population persists iff this is below one.
    double extinction_ratio() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct SystemState {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = 0.0;

    std::array<double, 4> as_array() const { return {x1, x2, x3, x4}; }
    static SystemState from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

    bool finite() const;

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

using StateDerivative = std::array<double, 4>;

struct SimGrid {
    double t0 = 0.0;
    double t_end = 400.0;
    double h = 0.01;
    double sample_every = 1.0;

    void validate() const;
    /// Integration steps per output sample.
    std::size_t steps_per_sample() const;
    /// Number of sampling intervals in [t0, t_end] (rounded down).
    std::size_t sample_count() const;

    friend bool operator==(const SimGrid&, const SimGrid&) = default;
};

/// Release rate as a function of time (individuals/day).
using ControlSignal = std::function<double(double)>;

/// Counts of post-step corrections, reported as run diagnostics.
struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t clamp_events = 0;
};

StateDerivative derivatives(const SystemState& state, const ModelParams& params, double u);

/// One classical RK4 step of length h starting at t. Components that go
/// negative are clamped to zero and counted in `stats` when given.
SystemState step_rk4(const SystemState& state, const ModelParams& params, const ControlSignal& u_fn,
                     double t, double h, IntegratorStats* stats = nullptr);

/// Integrates from t to t + n*h with n fixed steps.
SystemState integrate(SystemState state, const ModelParams& params, const ControlSignal& u_fn, double t,
                      double h, std::size_t n, IntegratorStats* stats = nullptr);

/// Instantaneous release of `amplitude` sterile males.
SystemState apply_pulse(const SystemState& state, double amplitude);

struct Equilibrium {
    SystemState state;
    bool extinct = false;
};

/// Positive steady state without releases, or the zero state flagged as
/// extinct when the wild population cannot persist.
Equilibrium wild_equilibrium(const ModelParams& params);

}  // namespace sit
