#include "sitmfc/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "sitmfc/format.hpp"

namespace sit {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const RunResult& result) {
    out << "day,x1,x2,x3,x4,y_ref,y_ref_dot,v_continuous,f_est,error\n";
    for (const auto& r : result.trajectory) {
        out << format_double(r.day) << ',' << format_double(r.state.x1) << ',' << format_double(r.state.x2) << ','
            << format_double(r.state.x3) << ',' << format_double(r.state.x4) << ',' << format_double(r.ref.y) << ','
            << format_double(r.ref.y_dot) << ',' << format_double(r.v_continuous) << ','
            << (r.estimator_ready ? format_double(r.f_est) : std::string()) << ',' << format_double(r.error)
            << '\n';
    }
}

void write_pulses_csv(std::ostream& out, const PulseTrain& pulses) {
    out << "day,amplitude\n";
    for (const auto& p : pulses.pulses()) out << p.day << ',' << format_double(p.amplitude) << '\n';
}

void write_summary_csv(std::ostream& out, const Scenario& s, const RunResult& r, std::optional<double> v_c) {
    out << "scenario,seed,alpha,k_p,tau,period_J,u_max,y_start,y_target,rmse_tracking,max_abs_error,"
           "total_released,saturation_count,reconstruction_error,final_error,final_tolerance,"
           "all_active_saturated,warmup_end,clamp_events,failed,success,v_c\n";
    const auto& m = r.metrics;
    const double y_start = r.trajectory.empty() ? s.reference.y_start : r.trajectory.front().ref.y;
    out << quote(s.name) << ',' << s.seed << ',' << format_double(s.controller.alpha) << ','
        << format_double(s.controller.k_p) << ',' << format_double(s.controller.tau) << ',' << s.pulse.period_J << ','
        << format_double(s.pulse.u_max) << ',' << format_double(y_start) << ','
        << format_double(s.reference.y_target) << ',' << format_double(m.rmse_tracking) << ','
        << format_double(m.max_abs_error) << ',' << format_double(m.total_released) << ',' << m.saturation_count
        << ',' << format_double(m.reconstruction_error) << ',' << format_double(r.final_error) << ','
        << format_double(r.final_tolerance) << ',' << (r.all_active_saturated ? 1 : 0) << ','
        << (r.warmup_end ? format_double(*r.warmup_end) : std::string()) << ',' << r.integrator.clamp_events << ','
        << (r.failed ? 1 : 0) << ',' << (m.success ? 1 : 0) << ','
        << (v_c ? format_double(*v_c) : std::string()) << '\n';
}

void write_mc_summary_csv(std::ostream& out, const MonteCarloConfig& mc, const MonteCarloSummary& summary) {
    const std::size_t n_mult = mc.perturbed.size();
    out << "run_id,seed";
    for (std::size_t i = 1; i <= n_mult; ++i) out << ",I" << i;
    out << ",rmse,total_released,saturation_count,success\n";

    std::vector<double> mean_mult(n_mult, 0.0);
    double mean_rmse = 0.0;
    double mean_release = 0.0;
    std::size_t saturations = 0;
    for (const auto& r : summary.runs) {
        out << r.run_id << ',' << r.seed;
        for (std::size_t i = 0; i < n_mult; ++i) {
            const double m = i < r.multipliers.size() ? r.multipliers[i] : std::nan("");
            mean_mult[i] += m;
            out << ',' << format_double(m);
        }
        out << ',' << format_double(r.metrics.rmse_tracking) << ',' << format_double(r.metrics.total_released) << ','
            << r.metrics.saturation_count << ',' << (r.metrics.success ? 1 : 0) << '\n';
        mean_rmse += r.metrics.rmse_tracking;
        mean_release += r.metrics.total_released;
        saturations += r.metrics.saturation_count;
    }
    const double n = summary.runs.empty() ? 1.0 : static_cast<double>(summary.runs.size());
    out << "aggregate," << mc.base_seed;
    for (double m : mean_mult) out << ',' << format_double(m / n);
    out << ',' << format_double(mean_rmse / n) << ',' << format_double(mean_release / n) << ',' << saturations << ','
        << summary.success_count << '\n';
}

}  // namespace sit
