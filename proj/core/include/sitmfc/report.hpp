#pragma once

// CSV run outputs. Comma-delimited, header first, LF line endings, numbers
// in shortest round-trip form.

#include <iosfwd>
#include <optional>

#include "sitmfc/experiments.hpp"

namespace sit {

/// day,x1,x2,x3,x4,y_ref,y_ref_dot,v_continuous,f_est,error. f_est is empty
/// before the estimator window fills.
void write_trajectory_csv(std::ostream& out, const RunResult& result);

/// day,amplitude
void write_pulses_csv(std::ostream& out, const PulseTrain& pulses);

/// One header row and one value row describing the scenario and its metrics.
/// `v_c` is the critical vector population when an epi model is configured.
void write_summary_csv(std::ostream& out, const Scenario& scenario, const RunResult& result,
                       std::optional<double> v_c = std::nullopt);

/// One row per run (run_id,seed,I1..In,rmse,total_released,saturation_count,
/// success) followed by an aggregate row: run_id "aggregate", the base seed,
/// mean multipliers, mean rmse, mean release, total saturations and the
/// success count.
void write_mc_summary_csv(std::ostream& out, const MonteCarloConfig& mc, const MonteCarloSummary& summary);

}  // namespace sit
