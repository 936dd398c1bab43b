#include "sitmfc/mfc.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sitmfc/error.hpp"

namespace sit {

namespace {

constexpr double kSpanTol = 1e-9;

// Composite Newton-Cotes on uniform nodes, exact for cubics when n >= 2.
double integrate_uniform(std::span<const double> f, double dx) {
    const std::size_t n = f.size() - 1;
    if (n == 0) return 0.0;
    if (n == 1) return 0.5 * dx * (f[0] + f[1]);

    double total = 0.0;
    const std::size_t simpson_end = (n % 2 == 0) ? n : n - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        total += dx / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if (simpson_end != n) {
        const std::size_t i = simpson_end;
        total += 3.0 * dx / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    return total;
}

}  // namespace

void ControllerConfig::validate() const {
    if (!(k_p > 0.0) || !std::isfinite(k_p)) throw InvalidParams("controller k_p must be > 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParams("controller tau must be > 0");
    if (alpha == 0.0 || !std::isfinite(alpha)) throw InvalidParams("controller alpha must be finite and non-zero");
    if (nu_order != 1) throw InvalidParams("controller nu_order must be 1");
}

SampleWindow::SampleWindow(double tau) : tau_(tau) {
    if (!(tau > 0.0)) throw InvalidParams("sample window tau must be > 0");
}

void SampleWindow::push(const Sample& s) {
    if (!samples_.empty() && !(s.t > samples_.back().t)) {
        throw InvalidWindow("sample times must be strictly increasing");
    }
    samples_.push_back(s);
    while (samples_.size() > 2 && samples_.back().t - samples_[1].t >= tau_ * (1.0 - kSpanTol)) {
        samples_.pop_front();
    }
}

double SampleWindow::span() const noexcept {
    return samples_.size() < 2 ? 0.0 : samples_.back().t - samples_.front().t;
}

bool SampleWindow::ready() const noexcept { return span() >= tau_ * (1.0 - kSpanTol); }

std::optional<double> f_estimate(const SampleWindow& window, double alpha, double tau) {
    const auto& dq = window.samples();
    std::vector<Sample> tmp(dq.begin(), dq.end());
    return f_estimate(std::span<const Sample>(tmp), alpha, tau);
}

std::optional<double> f_estimate(std::span<const Sample> samples, double alpha, double tau) {
    if (!(tau > 0.0)) throw InvalidParams("estimator tau must be > 0");
    if (samples.size() < 2) return std::nullopt;
    const double t_end = samples.back().t;
    const double t_start = t_end - tau;
    if (samples.front().t > t_start + kSpanTol * tau) return std::nullopt;

    // Trailing samples that fall inside [t_end - tau, t_end].
    std::size_t first = samples.size() - 1;
    while (first > 0 && samples[first - 1].t >= t_start - kSpanTol * tau) --first;
    const auto win = samples.subspan(first);
    if (win.size() < 2) throw InvalidWindow("estimator window has fewer than two samples");

    const std::size_t n = win.size() - 1;
    const double dx = tau / static_cast<double>(n);
    for (std::size_t i = 0; i < win.size(); ++i) {
        const double expected = t_start + static_cast<double>(i) * dx;
        if (std::abs(win[i].t - expected) > kSpanTol * tau) {
            throw InvalidWindow("estimator samples must be uniformly spaced and aligned with tau");
        }
    }

    std::vector<double> integrand(win.size());
    for (std::size_t i = 0; i < win.size(); ++i) {
        const double s = static_cast<double>(i) * dx;
        integrand[i] = (tau - 2.0 * s) * win[i].y + alpha * s * (tau - s) * win[i].u;
    }
    return -6.0 / (tau * tau * tau) * integrate_uniform(integrand, dx);
}

double ip_control(double f_est, double y, double y_star, double y_star_dot, const ControllerConfig& cfg) {
    const double e = y - y_star;
    switch (cfg.sign) {
        case IpSign::positive_feedback:
            return (-f_est + cfg.k_p * e + y_star_dot) / cfg.alpha;
        case IpSign::negative_feedback:
        default:
            return -(f_est - y_star_dot + cfg.k_p * e) / cfg.alpha;
    }
}

std::string_view to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::exponential_decay: return "exponential";
        case ReferenceKind::constant_hold: return "constant";
        case ReferenceKind::smooth_step: return "smoothstep";
    }
    return "?";
}

std::optional<ReferenceKind> parse_reference_kind(std::string_view s) {
    if (s == "exponential") return ReferenceKind::exponential_decay;
    if (s == "constant") return ReferenceKind::constant_hold;
    if (s == "smoothstep") return ReferenceKind::smooth_step;
    return std::nullopt;
}

void ReferenceTrajectory::validate() const {
    if (!(y_target >= 0.0) || !std::isfinite(y_target)) throw InvalidParams("reference y_target must be >= 0");
    if (!(t_settle > 0.0) || !std::isfinite(t_settle)) throw InvalidParams("reference t_settle must be > 0");
    if (!std::isfinite(y_start)) throw InvalidParams("reference y_start must be finite");
}

double ReferenceTrajectory::decay_rate() const { return std::log(100.0) / t_settle; }

ReferencePoint reference(double t, const ReferenceTrajectory& ref) {
    const double span = ref.y_start - ref.y_target;
    switch (ref.kind) {
        case ReferenceKind::constant_hold:
            return {ref.y_start, 0.0};
        case ReferenceKind::exponential_decay: {
            const double lambda = ref.decay_rate();
            const double decay = std::exp(-lambda * t);
            return {ref.y_target + span * decay, -lambda * span * decay};
        }
        case ReferenceKind::smooth_step:
        default: {
            if (t >= ref.t_settle) return {ref.y_target, 0.0};
            const double s = t <= 0.0 ? 0.0 : t / ref.t_settle;
            const double shape = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
            const double slope = 30.0 * s * s * (1.0 - s) * (1.0 - s) / ref.t_settle;
            return {ref.y_start - span * shape, -span * slope};
        }
    }
}

}  // namespace sit
