#pragma once

// Impulsive release planning.
//
// Sterile-male stock obeys x4' = u - delta_S x4, so a release of size A on
// day d contributes A exp(-delta_S (t - d)) afterwards. Releases happen every
// J days; each amplitude is chosen so that the predicted mean stock over the
// following J daily samples equals the continuous command V at the release
// day:
//
//   delta_k = (V(k) - mean tail(k+1..k+J)) / mean unit(1..J)
//
// clamped to [0, u_max].

#include <cstdint>
#include <vector>

namespace sit {

struct PulseConfig {
    int period_J = 3;
    double delta_S_nominal = 0.12;
    double u_max = 1e6;

    void validate() const;

    friend bool operator==(const PulseConfig&, const PulseConfig&) = default;
};

struct Pulse {
    std::int64_t day = 0;
    double amplitude = 0.0;
    /// Requested amplitude before clamping.
    double requested = 0.0;

    bool saturated(double u_max) const { return requested > u_max; }
};

/// Releases in increasing day order.
class PulseTrain {
public:
    const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
    bool empty() const noexcept { return pulses_.empty(); }
    std::size_t size() const noexcept { return pulses_.size(); }

    /// Throws SchedulingError unless `p.day` is after the last release.
    void append(const Pulse& p);

    double total_released() const;
    std::size_t saturation_count(double u_max) const;

    /// Free response of the released stock at time t, using decay rate
    /// `delta_S`; only releases with day <= t contribute.
    double stock_at(double t, double delta_S) const;

private:
    std::vector<Pulse> pulses_;
};

/// (1/J) sum_{m=1..J} exp(-delta_S m).
double unit_pulse_mean(double delta_S, int J);

/// Mean of the free stock response over days k+1..k+J from past releases.
/// Throws SchedulingError if any release is after day k.
double predict_tail_mean(const PulseTrain& history, double delta_S, std::int64_t k, int J);

struct PulseDecision {
    double amplitude = 0.0;
    double requested = 0.0;
};

/// Throws InvalidParams when unit_mean <= 0.
PulseDecision pulse_amplitude(double v_k, double tail_mean, double unit_mean, double u_max);

bool is_release_day(std::int64_t day, int J);

/// Plans and appends the release for `day` given the command `v_k`.
/// Throws SchedulingError on non-release days.
PulseTrain plan_step(double v_k, PulseTrain history, std::int64_t day, const PulseConfig& cfg);

/// Predicted stock mean over days k+1..k+J once `history` (which may
/// include the release at day k) is in place.
double predicted_window_mean(const PulseTrain& history, double delta_S, std::int64_t k, int J);

}  // namespace sit
