#include "sitmfc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sitmfc/error.hpp"

namespace sit {

void PulseConfig::validate() const {
    if (period_J < 1) throw InvalidParams("pulse period_J must be >= 1");
    if (!(delta_S_nominal > 0.0) || !std::isfinite(delta_S_nominal)) {
        throw InvalidParams("pulse delta_S_nominal must be > 0");
    }
    if (!(u_max >= 0.0) || !std::isfinite(u_max)) throw InvalidParams("pulse u_max must be finite and >= 0");
}

void PulseTrain::append(const Pulse& p) {
    if (!pulses_.empty() && p.day <= pulses_.back().day) {
        throw SchedulingError("pulse days must be strictly increasing (got day " + std::to_string(p.day) +
                              " after " + std::to_string(pulses_.back().day) + ")");
    }
    pulses_.push_back(p);
}

double PulseTrain::total_released() const {
    double total = 0.0;
    for (const auto& p : pulses_) total += p.amplitude;
    return total;
}

std::size_t PulseTrain::saturation_count(double u_max) const {
    return static_cast<std::size_t>(
        std::count_if(pulses_.begin(), pulses_.end(), [u_max](const Pulse& p) { return p.saturated(u_max); }));
}

double PulseTrain::stock_at(double t, double delta_S) const {
    double stock = 0.0;
    for (const auto& p : pulses_) {
        const double age = t - static_cast<double>(p.day);
        if (age < 0.0) break;
        stock += p.amplitude * std::exp(-delta_S * age);
    }
    return stock;
}

double unit_pulse_mean(double delta_S, int J) {
    if (J < 1) throw InvalidParams("unit_pulse_mean: J must be >= 1");
    if (!(delta_S > 0.0)) throw InvalidParams("unit_pulse_mean: delta_S must be > 0");
    double sum = 0.0;
    for (int m = 1; m <= J; ++m) sum += std::exp(-delta_S * m);
    return sum / J;
}

double predict_tail_mean(const PulseTrain& history, double delta_S, std::int64_t k, int J) {
    if (!history.empty() && history.pulses().back().day > k) {
        throw SchedulingError("predict_tail_mean: history contains a release after day " + std::to_string(k));
    }
    return predicted_window_mean(history, delta_S, k, J);
}

double predicted_window_mean(const PulseTrain& history, double delta_S, std::int64_t k, int J) {
    double sum = 0.0;
    for (const auto& p : history.pulses()) {
        if (p.day > k) break;
        const double lag = static_cast<double>(k - p.day);
        double contrib = 0.0;
        for (int m = 1; m <= J; ++m) contrib += std::exp(-delta_S * (lag + m));
        sum += p.amplitude * contrib;
    }
    return sum / J;
}

PulseDecision pulse_amplitude(double v_k, double tail_mean, double unit_mean, double u_max) {
    if (!(unit_mean > 0.0)) throw InvalidParams("pulse_amplitude: unit response mean must be > 0");
    const double requested = (v_k - tail_mean) / unit_mean;
    return {std::clamp(requested, 0.0, u_max), requested};
}

bool is_release_day(std::int64_t day, int J) { return J >= 1 && day >= 0 && day % J == 0; }

PulseTrain plan_step(double v_k, PulseTrain history, std::int64_t day, const PulseConfig& cfg) {
    if (!is_release_day(day, cfg.period_J)) {
        throw SchedulingError("day " + std::to_string(day) + " is not a release day for J=" +
                              std::to_string(cfg.period_J));
    }
    const double tail = predict_tail_mean(history, cfg.delta_S_nominal, day, cfg.period_J);
    const double unit = unit_pulse_mean(cfg.delta_S_nominal, cfg.period_J);
    const auto decision = pulse_amplitude(v_k, tail, unit, cfg.u_max);
    history.append({day, decision.amplitude, decision.requested});
    return history;
}

}  // namespace sit
