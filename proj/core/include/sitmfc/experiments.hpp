#pragma once

// Closed-loop scenarios: daily sampling of the egg count, F estimation,
// iP command, impulsive releases every J days, RK4 plant in between.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sitmfc/epi.hpp"
#include "sitmfc/mfc.hpp"
#include "sitmfc/plant.hpp"
#include "sitmfc/pulse.hpp"

namespace sit {

struct Scenario {
    std::string name = "nominal";
    ModelParams params_true;
    ModelParams params_planner;
    ControllerConfig controller;
    PulseConfig pulse;
    ReferenceTrajectory reference;
    /// When set, y_start is replaced by the measured initial egg count.
    bool reference_from_initial_output = true;
    SimGrid grid;
    std::uint64_t seed = 0;
    /// Optional epidemiological threshold reported alongside the run.
    std::optional<EpiParams> epi;

    void validate() const;
};

struct TrajectoryRow {
    double day = 0.0;
    SystemState state;  // sampled before any release that day
    ReferencePoint ref;
    double v_continuous = 0.0;
    double f_est = 0.0;
    double error = 0.0;
    bool estimator_ready = false;
};

struct RunMetrics {
    double rmse_tracking = 0.0;
    double max_abs_error = 0.0;
    double total_released = 0.0;
    std::size_t saturation_count = 0;
    double reconstruction_error = 0.0;
    bool success = false;
};

struct RunResult {
    std::vector<TrajectoryRow> trajectory;
    PulseTrain pulses;
    RunMetrics metrics;
    IntegratorStats integrator;
    /// |y(t_end) - y*(t_end)|.
    double final_error = 0.0;
    /// Tolerance the final error is judged against.
    double final_tolerance = 0.0;
    /// Every release issued after estimator warm-up was clamped at u_max.
    bool all_active_saturated = false;
    /// First day on which the estimator was trusted, if ever.
    std::optional<double> warmup_end;
    bool failed = false;
    std::string failure;
};

/// Relative final tolerance used for success.
inline constexpr double kFinalTolerance = 0.05;

RunResult run_scenario(const Scenario& s);

/// Tracking and release metrics over aligned daily series. `success` is
/// left false; run_scenario decides it. Throws AlignmentError on length
/// mismatch.
RunMetrics compute_metrics(std::span<const SystemState> states, std::span<const ReferencePoint> ref,
                           const PulseTrain& pulses, std::span<const double> v_trace, double u_max);

struct AlphaCalibration {
    double alpha = 0.0;
    bool ok = false;
};

inline constexpr double kAlphaProbeStock = 1e5;
inline constexpr double kAlphaProbeDays = 5.0;
/// Used when the probe is degenerate.
inline constexpr double kAlphaFallback = -1e-3;

/// Open-loop probe from the wild equilibrium: hold the sterile stock at
/// `probe_stock` for `probe_days` and return alpha = mean egg slope / stock.
AlphaCalibration calibrate_alpha(const ModelParams& params, const SimGrid& grid,
                                 double probe_stock = kAlphaProbeStock, double probe_days = kAlphaProbeDays);

enum class ModelParam { beta_E, cap_K, nu_E, delta_E, nu, delta_M, gamma_S, delta_F, delta_S };

std::string_view to_string(ModelParam p);
std::optional<ModelParam> parse_model_param(std::string_view s);
double& param_ref(ModelParams& params, ModelParam p);
double param_value(const ModelParams& params, ModelParam p);

struct MonteCarloConfig {
    int n_runs = 100;
    double lo = 0.7;
    double hi = 1.3;
    std::vector<ModelParam> perturbed = {ModelParam::beta_E,  ModelParam::cap_K,   ModelParam::nu_E,
                                         ModelParam::delta_E, ModelParam::nu,      ModelParam::delta_M,
                                         ModelParam::delta_F, ModelParam::delta_S};
    std::uint64_t base_seed = 42;
    /// 0 selects the hardware concurrency.
    unsigned threads = 0;

    void validate() const;

    friend bool operator==(const MonteCarloConfig&, const MonteCarloConfig&) = default;
};

struct MonteCarloRun {
    int run_id = 0;
    std::uint64_t seed = 0;
    std::vector<double> multipliers;
    ModelParams params_true;
    ModelParams params_planner;
    RunMetrics metrics;
    bool all_active_saturated = false;
    double final_error = 0.0;
    bool failed = false;
    std::string failure;
};

struct MonteCarloSummary {
    std::vector<MonteCarloRun> runs;
    int success_count = 0;
};

/// Scenario for run `index` of a campaign: params_true multiplied by the
/// drawn factors, everything else as in `base`.
Scenario perturbed_scenario(const MonteCarloConfig& mc, const Scenario& base, int index,
                            std::vector<double>* multipliers = nullptr);

MonteCarloSummary run_monte_carlo(const MonteCarloConfig& mc, const Scenario& base);

inline constexpr double kDefaultTargetEggs = 5000.0;
inline constexpr double kDefaultSettleDays = 300.0;
inline constexpr double kDefaultHorizonDays = 400.0;
inline constexpr double kDefaultKp = 0.05;
inline constexpr double kDefaultTau = 7.0;
/// Multiplier applied to the probed alpha. The probe measures the gain of a
/// sustained stock; a larger magnitude damps the loop near low egg levels.
inline constexpr double kDefaultAlphaScale = 4.0;

/// Nominal parameters, J=3, smooth descent to kDefaultTargetEggs, alpha
/// calibrated on the planner's parameters.
Scenario nominal_scenario();
/// Nominal with releases every 6 days.
Scenario j6_scenario();
/// Nominal planner, plant with delta_S scaled by 1.3.
Scenario mismatch_scenario();

}  // namespace sit
