// sitmfc: batch front end for the closed-loop release planner.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sitmfc/config.hpp"
#include "sitmfc/error.hpp"
#include "sitmfc/experiments.hpp"
#include "sitmfc/format.hpp"
#include "sitmfc/report.hpp"
#include "sitmfc/svg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTrackingFailed = 2;

struct CommonOptions {
    std::string config;
    std::string scenario;
    std::optional<double> horizon;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "Run configuration file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--scenario", o.scenario, "nominal, j6, mismatch or custom")
        ->check(CLI::IsMember({"nominal", "j6", "mismatch", "custom"}));
    cmd->add_option("--horizon", o.horizon, "Simulated days")->check(CLI::PositiveNumber);
}

sit::RunConfig load(const CommonOptions& o) {
    sit::RunConfig cfg = o.config.empty() ? sit::RunConfig{} : sit::load_run_config(o.config);
    if (o.horizon) cfg.grid.t_end = cfg.grid.t0 + *o.horizon;
    return cfg;
}

sit::ScenarioKind scenario_kind(const CommonOptions& o) {
    if (o.scenario.empty()) return o.config.empty() ? sit::ScenarioKind::nominal : sit::ScenarioKind::custom;
    return *sit::parse_scenario_kind(o.scenario);
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sit::Error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw sit::Error("failed writing '" + path.string() + "'");
}

fs::path prepare_out(const std::string& dir) {
    fs::path out(dir);
    fs::create_directories(out);
    return out;
}

int cmd_simulate(const CommonOptions& o, const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<int> mc_run, bool plot) {
    const sit::RunConfig cfg = load(o);
    sit::Scenario s = sit::build_scenario(cfg, scenario_kind(o));
    if (mc_run) {
        sit::MonteCarloConfig mc = cfg.montecarlo.value_or(sit::MonteCarloConfig{});
        if (seed) mc.base_seed = *seed;
        s = sit::perturbed_scenario(mc, s, *mc_run);
    } else if (seed) {
        s.seed = *seed;
    }

    const sit::RunResult r = sit::run_scenario(s);
    std::optional<double> v_c;
    if (s.epi) v_c = sit::critical_vector_pop(*s.epi);

    const fs::path out = prepare_out(out_dir);
    write_file(out / "trajectory.csv", [&](std::ostream& f) { sit::write_trajectory_csv(f, r); });
    write_file(out / "pulses.csv", [&](std::ostream& f) { sit::write_pulses_csv(f, r.pulses); });
    write_file(out / "summary.csv", [&](std::ostream& f) { sit::write_summary_csv(f, s, r, v_c); });
    if (plot) {
        const std::string title = "scenario " + s.name;
        write_file(out / "states.svg", [&](std::ostream& f) { f << sit::states_svg(r, title); });
        write_file(out / "control_continuous.svg",
                   [&](std::ostream& f) { f << sit::control_continuous_svg(r, title); });
        write_file(out / "control_impulse.svg", [&](std::ostream& f) { f << sit::control_impulse_svg(r, title); });
    }

    std::cout << "scenario " << s.name << ": rmse " << sit::format_double(r.metrics.rmse_tracking)
              << ", final error " << sit::format_double(r.final_error) << " (tolerance "
              << sit::format_double(r.final_tolerance) << "), released "
              << sit::format_double(r.metrics.total_released) << ", saturated " << r.metrics.saturation_count
              << ", success " << (r.metrics.success ? "yes" : "no") << '\n';
    if (r.failed) std::cerr << "run aborted: " << r.failure << '\n';
    return r.metrics.success ? kExitOk : kExitTrackingFailed;
}

int cmd_montecarlo(const CommonOptions& o, const std::string& out_dir, std::optional<int> runs,
                   std::optional<std::uint64_t> seed, std::optional<unsigned> threads) {
    const sit::RunConfig cfg = load(o);
    const sit::Scenario base = sit::build_scenario(cfg, scenario_kind(o));
    sit::MonteCarloConfig mc = cfg.montecarlo.value_or(sit::MonteCarloConfig{});
    if (runs) mc.n_runs = *runs;
    if (seed) mc.base_seed = *seed;
    if (threads) mc.threads = *threads;

    const sit::MonteCarloSummary summary = sit::run_monte_carlo(mc, base);
    const fs::path out = prepare_out(out_dir);
    write_file(out / "mc_summary.csv", [&](std::ostream& f) { sit::write_mc_summary_csv(f, mc, summary); });

    std::cout << "montecarlo " << base.name << ": " << summary.success_count << '/' << mc.n_runs
              << " runs tracked\n";
    for (const auto& r : summary.runs) {
        if (r.metrics.success) continue;
        std::cout << "  run " << r.run_id << " failed: "
                  << (r.failed ? r.failure
                               : r.all_active_saturated ? std::string("all active releases saturated")
                                                        : "final error " + sit::format_double(r.final_error))
                  << '\n';
    }
    return summary.success_count == mc.n_runs ? kExitOk : kExitTrackingFailed;
}

int cmd_equilibrium(const CommonOptions& o) {
    const sit::RunConfig cfg = load(o);
    cfg.model.validate();
    const auto eq = sit::wild_equilibrium(cfg.model);
    std::cout << "x1* = " << sit::format_double(eq.state.x1) << '\n'
              << "x2* = " << sit::format_double(eq.state.x2) << '\n'
              << "x3* = " << sit::format_double(eq.state.x3) << '\n'
              << "x4* = " << sit::format_double(eq.state.x4) << '\n';
    if (eq.extinct) {
        std::cout << "extinct: the wild population cannot persist (extinction ratio "
                  << sit::format_double(cfg.model.extinction_ratio()) << " >= 1)\n";
    }
    if (cfg.epi) {
        cfg.epi->params.validate();
        std::cout << "V_c = " << sit::format_double(sit::critical_vector_pop(cfg.epi->params)) << '\n'
                  << "x1 target = " << sit::format_double(*sit::epi_egg_target(cfg)) << " (margin "
                  << sit::format_double(cfg.epi->target_margin) << ")\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-free control of sterile-male releases"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    std::string sim_out = "out";
    std::optional<std::uint64_t> sim_seed;
    std::optional<int> sim_mc_run;
    bool plot = false;
    auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
    add_common(sim, sim_opts);
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--seed", sim_seed, "Scenario seed; with --mc-run, the campaign base seed");
    sim->add_option("--mc-run", sim_mc_run, "Replay this Monte Carlo run index")->check(CLI::NonNegativeNumber);
    sim->add_flag("--plot", plot, "Also write SVG figures");

    CommonOptions mc_opts;
    std::string mc_out = "out";
    std::optional<int> mc_runs;
    std::optional<std::uint64_t> mc_seed;
    std::optional<unsigned> mc_threads;
    auto* mcc = app.add_subcommand("montecarlo", "Run a parameter-perturbation campaign");
    add_common(mcc, mc_opts);
    mcc->add_option("--out", mc_out, "Output directory");
    mcc->add_option("--runs", mc_runs, "Number of runs")->check(CLI::PositiveNumber);
    mcc->add_option("--seed", mc_seed, "Base seed");
    mcc->add_option("--threads", mc_threads, "Worker threads (0 = hardware concurrency)");

    CommonOptions eq_opts;
    auto* eqc = app.add_subcommand("equilibrium", "Print the wild equilibrium and epidemic threshold");
    add_common(eqc, eq_opts);

    std::string dump_config;
    auto* dump = app.add_subcommand("dump-config", "Print the default (or loaded) configuration");
    dump->add_option("--config", dump_config, "Configuration to normalise")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*sim) return cmd_simulate(sim_opts, sim_out, sim_seed, sim_mc_run, plot);
        if (*mcc) return cmd_montecarlo(mc_opts, mc_out, mc_runs, mc_seed, mc_threads);
        if (*eqc) return cmd_equilibrium(eq_opts);
        if (*dump) {
            std::cout << sit::dump_run_config(dump_config.empty() ? sit::RunConfig{}
                                                                  : sit::load_run_config(dump_config));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
