#pragma once

// Sectioned key-value run configuration.
//
//   # comment
//   [model]
//   beta_E = 10
//   [controller]
//   alpha = auto        # probed on the planner model, times alpha_scale
//
// Sections: model, model.true, controller, pulse, reference, grid,
// montecarlo, epi. Unknown sections and keys are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sitmfc/epi.hpp"
#include "sitmfc/experiments.hpp"
#include "sitmfc/mfc.hpp"
#include "sitmfc/plant.hpp"

namespace sit {

struct ControllerSection {
    /// Unset means probe the planner model and scale by alpha_scale.
    std::optional<double> alpha;
    double alpha_scale = kDefaultAlphaScale;
    double k_p = kDefaultKp;
    double tau = kDefaultTau;
    IpSign sign = IpSign::negative_feedback;

    friend bool operator==(const ControllerSection&, const ControllerSection&) = default;
};

struct PulseSection {
    int period_J = 3;
    /// Unset means the planner model's delta_S.
    std::optional<double> delta_S_nominal;
    double u_max = 1e6;

    friend bool operator==(const PulseSection&, const PulseSection&) = default;
};

struct ReferenceSection {
    ReferenceKind kind = ReferenceKind::smooth_step;
    /// Unset means the measured initial egg count.
    std::optional<double> y_start;
    /// Unset means the epi-derived level when [epi] is present, else
    /// kDefaultTargetEggs.
    std::optional<double> y_target;
    double t_settle = kDefaultSettleDays;

    friend bool operator==(const ReferenceSection&, const ReferenceSection&) = default;
};

struct EpiSection {
    EpiParams params;
    /// Fraction of the critical vector population used as the target.
    double target_margin = 0.9;

    friend bool operator==(const EpiSection&, const EpiSection&) = default;
};

struct RunConfig {
    ModelParams model;
    /// Plant overrides on top of [model], in file order.
    std::vector<std::pair<ModelParam, double>> model_true;
    ControllerSection controller;
    PulseSection pulse;
    ReferenceSection reference;
    SimGrid grid{0.0, kDefaultHorizonDays, 0.01, 1.0};
    std::optional<MonteCarloConfig> montecarlo;
    std::optional<EpiSection> epi;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the line, section and key.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Text that parse_run_config turns back into `cfg`.
std::string dump_run_config(const RunConfig& cfg);

enum class ScenarioKind { nominal, j6, mismatch, custom };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view s);

/// Planner parameters are [model]. `custom` uses the configuration as
/// written; `nominal` drops [model.true] and forces J=3; `j6` is nominal
/// with J=6; `mismatch` is nominal with the plant's delta_S scaled by 1.3.
Scenario build_scenario(const RunConfig& cfg, ScenarioKind kind = ScenarioKind::custom);

/// Egg target implied by [epi], if present.
std::optional<double> epi_egg_target(const RunConfig& cfg);

}  // namespace sit
