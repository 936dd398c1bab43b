#pragma once

// Model-free control with a first-order ultra-local model
//
//   y' = F + alpha u
//
// F is re-estimated from a trailing window of (y, u) samples and cancelled
// by the intelligent proportional (iP) law.

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string_view>

namespace sit {

/// Sign of the proportional term in the iP law.
enum class IpSign {
    /// u = -(F_est - y*' + K_p e) / alpha; closed loop e' = -K_p e.
    negative_feedback,
    /// V = (-F_est + K_p e + y*') / alpha, the alternative printed form.
    positive_feedback,
};

struct ControllerConfig {
    double alpha = -1e-3;  // (eggs/day) per sterile male
    double k_p = 0.1;      // 1/day
    double tau = 5.0;      // day
    int nu_order = 1;
    IpSign sign = IpSign::negative_feedback;

    void validate() const;

    friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

struct Sample {
    double t = 0.0;
    double y = 0.0;
    double u = 0.0;
};

/// Trailing samples covering the most recent `tau` of time.
class SampleWindow {
public:
    explicit SampleWindow(double tau);

    /// Appends a sample; times must be strictly increasing. Samples older
    /// than needed to span `tau` are dropped.
    void push(const Sample& s);
    void clear() { samples_.clear(); }

    double tau() const noexcept { return tau_; }
    double span() const noexcept;
    bool ready() const noexcept;
    std::size_t size() const noexcept { return samples_.size(); }
    const std::deque<Sample>& samples() const noexcept { return samples_; }

private:
    double tau_;
    std::deque<Sample> samples_;
};

/// Algebraic estimate of F over the trailing window,
///
///   F_est = -(6/tau^3) int_0^tau [(tau - 2s) y(s) + alpha s (tau - s) u(s)] ds,
///
/// with s measured from the start of the window. Integrated by composite
/// Simpson (3/8 closing panel on odd counts), exact when y is affine and u
/// constant. Returns nullopt while the window spans less than tau.
/// Throws InvalidWindow on non-uniform spacing.
std::optional<double> f_estimate(const SampleWindow& window, double alpha, double tau);
std::optional<double> f_estimate(std::span<const Sample> samples, double alpha, double tau);

/// iP control law. No saturation is applied.
double ip_control(double f_est, double y, double y_star, double y_star_dot, const ControllerConfig& cfg);

enum class ReferenceKind {
    exponential_decay,
    constant_hold,
    /// Quintic transition with zero slope and curvature at both ends,
    /// reaching y_target exactly at t_settle.
    smooth_step,
};

std::string_view to_string(ReferenceKind kind);
std::optional<ReferenceKind> parse_reference_kind(std::string_view s);

struct ReferencePoint {
    double y = 0.0;
    double y_dot = 0.0;
};

struct ReferenceTrajectory {
    ReferenceKind kind = ReferenceKind::smooth_step;
    double y_start = 0.0;
    double y_target = 0.0;
    double t_settle = 250.0;

    void validate() const;
    /// Decay rate of the exponential kind: 1% of the span remains at t_settle.
    double decay_rate() const;

    friend bool operator==(const ReferenceTrajectory&, const ReferenceTrajectory&) = default;
};

ReferencePoint reference(double t, const ReferenceTrajectory& ref);

}  // namespace sit
