#include "sitmfc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sitmfc/error.hpp"
#include "sitmfc/format.hpp"

namespace sit {

namespace {

constexpr double kMismatchFactor = 1.3;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw InvalidParams("expected a number, got '" + std::string(v) + "'");
    return out;
}

template <class Int>
Int parse_int(std::string_view v) {
    Int out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw InvalidParams("expected an integer, got '" + std::string(v) + "'");
    return out;
}

std::optional<double> parse_auto_double(std::string_view v) {
    if (v == "auto") return std::nullopt;
    return parse_double(v);
}

std::string auto_text(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }

using Setter = std::function<void(std::string_view)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

SectionTable model_table(ModelParams& m) {
    SectionTable t;
    for (auto p : {ModelParam::beta_E, ModelParam::cap_K, ModelParam::nu_E, ModelParam::delta_E, ModelParam::nu,
                   ModelParam::delta_M, ModelParam::gamma_S, ModelParam::delta_F, ModelParam::delta_S}) {
        t.emplace(std::string(to_string(p)), [&m, p](std::string_view v) { param_ref(m, p) = parse_double(v); });
    }
    return t;
}

SectionTable model_true_table(std::vector<std::pair<ModelParam, double>>& overrides) {
    SectionTable t;
    for (auto p : {ModelParam::beta_E, ModelParam::cap_K, ModelParam::nu_E, ModelParam::delta_E, ModelParam::nu,
                   ModelParam::delta_M, ModelParam::gamma_S, ModelParam::delta_F, ModelParam::delta_S}) {
        t.emplace(std::string(to_string(p)),
                  [&overrides, p](std::string_view v) { overrides.emplace_back(p, parse_double(v)); });
    }
    return t;
}

SectionTable controller_table(ControllerSection& c) {
    return {
        {"alpha", [&c](std::string_view v) { c.alpha = parse_auto_double(v); }},
        {"alpha_scale", [&c](std::string_view v) { c.alpha_scale = parse_double(v); }},
        {"k_p", [&c](std::string_view v) { c.k_p = parse_double(v); }},
        {"tau", [&c](std::string_view v) { c.tau = parse_double(v); }},
        {"sign",
         [&c](std::string_view v) {
             if (v == "negative") {
                 c.sign = IpSign::negative_feedback;
             } else if (v == "positive") {
                 c.sign = IpSign::positive_feedback;
             } else {
                 throw InvalidParams("expected 'negative' or 'positive'");
             }
         }},
    };
}

SectionTable pulse_table(PulseSection& p) {
    return {
        {"period_J", [&p](std::string_view v) { p.period_J = parse_int<int>(v); }},
        {"delta_S_nominal", [&p](std::string_view v) { p.delta_S_nominal = parse_auto_double(v); }},
        {"u_max", [&p](std::string_view v) { p.u_max = parse_double(v); }},
    };
}

SectionTable reference_table(ReferenceSection& r) {
    return {
        {"kind",
         [&r](std::string_view v) {
             const auto k = parse_reference_kind(v);
             if (!k) throw InvalidParams("expected 'smoothstep', 'exponential' or 'constant'");
             r.kind = *k;
         }},
        {"y_start", [&r](std::string_view v) { r.y_start = parse_auto_double(v); }},
        {"y_target", [&r](std::string_view v) { r.y_target = parse_auto_double(v); }},
        {"t_settle", [&r](std::string_view v) { r.t_settle = parse_double(v); }},
    };
}

SectionTable grid_table(SimGrid& g) {
    return {
        {"t0", [&g](std::string_view v) { g.t0 = parse_double(v); }},
        {"t_end", [&g](std::string_view v) { g.t_end = parse_double(v); }},
        {"h", [&g](std::string_view v) { g.h = parse_double(v); }},
        {"sample_every", [&g](std::string_view v) { g.sample_every = parse_double(v); }},
    };
}

SectionTable montecarlo_table(MonteCarloConfig& mc) {
    return {
        {"runs", [&mc](std::string_view v) { mc.n_runs = parse_int<int>(v); }},
        {"lo", [&mc](std::string_view v) { mc.lo = parse_double(v); }},
        {"hi", [&mc](std::string_view v) { mc.hi = parse_double(v); }},
        {"seed", [&mc](std::string_view v) { mc.base_seed = parse_int<std::uint64_t>(v); }},
        {"threads", [&mc](std::string_view v) { mc.threads = parse_int<unsigned>(v); }},
        {"perturbed",
         [&mc](std::string_view v) {
             mc.perturbed.clear();
             while (!v.empty()) {
                 const auto comma = v.find(',');
                 const auto item = trim(v.substr(0, comma));
                 const auto p = parse_model_param(item);
                 if (!p) throw InvalidParams("unknown model parameter '" + std::string(item) + "'");
                 mc.perturbed.push_back(*p);
                 if (comma == std::string_view::npos) break;
                 v.remove_prefix(comma + 1);
             }
         }},
    };
}

SectionTable epi_table(EpiSection& e) {
    return {
        {"bite_rate", [&e](std::string_view v) { e.params.bite_rate = parse_double(v); }},
        {"p_v2h", [&e](std::string_view v) { e.params.p_v2h = parse_double(v); }},
        {"p_h2v", [&e](std::string_view v) { e.params.p_h2v = parse_double(v); }},
        {"host_pop", [&e](std::string_view v) { e.params.host_pop = parse_double(v); }},
        {"recovery", [&e](std::string_view v) { e.params.recovery = parse_double(v); }},
        {"vector_death", [&e](std::string_view v) { e.params.vector_death = parse_double(v); }},
        {"target_margin", [&e](std::string_view v) { e.target_margin = parse_double(v); }},
    };
}

[[noreturn]] void fail(std::size_t line, std::string_view section, std::string_view key, std::string_view msg) {
    std::string where = "config line " + std::to_string(line);
    if (!section.empty()) where += ", section [" + std::string(section) + "]";
    if (!key.empty()) where += ", key '" + std::string(key) + "'";
    throw ConfigError(where + ": " + std::string(msg));
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    SectionTable table;
    std::set<std::string, std::less<>> seen_sections;
    std::set<std::string, std::less<>> seen_keys;

    auto open_section = [&](std::string_view name, std::size_t line) {
        if (!seen_sections.insert(std::string(name)).second) fail(line, name, {}, "duplicate section");
        section = name;
        seen_keys.clear();
        if (name == "model") {
            table = model_table(cfg.model);
        } else if (name == "model.true") {
            table = model_true_table(cfg.model_true);
        } else if (name == "controller") {
            table = controller_table(cfg.controller);
        } else if (name == "pulse") {
            table = pulse_table(cfg.pulse);
        } else if (name == "reference") {
            table = reference_table(cfg.reference);
        } else if (name == "grid") {
            table = grid_table(cfg.grid);
        } else if (name == "montecarlo") {
            cfg.montecarlo.emplace();
            table = montecarlo_table(*cfg.montecarlo);
        } else if (name == "epi") {
            cfg.epi.emplace();
            table = epi_table(*cfg.epi);
        } else {
            fail(line, name, {}, "unknown section");
        }
    };

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, section, {}, "malformed section header");
            open_section(trim(line.substr(1, line.size() - 2)), line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, section, {}, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) fail(line_no, {}, key, "key outside of any section");
        if (key.empty()) fail(line_no, section, {}, "empty key");
        const auto it = table.find(key);
        if (it == table.end()) fail(line_no, section, key, "unknown key");
        if (!seen_keys.insert(std::string(key)).second) fail(line_no, section, key, "duplicate key");
        if (value.empty()) fail(line_no, section, key, "missing value");
        try {
            it->second(value);
        } catch (const Error& e) {
            fail(line_no, section, key, e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& cfg) {
    std::ostringstream o;
    auto kv = [&o](std::string_view k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto num = [&kv](std::string_view k, double v) { kv(k, format_double(v)); };

    o << "[model]\n";
    for (auto p : {ModelParam::beta_E, ModelParam::cap_K, ModelParam::nu_E, ModelParam::delta_E, ModelParam::nu,
                   ModelParam::delta_M, ModelParam::gamma_S, ModelParam::delta_F, ModelParam::delta_S}) {
        num(to_string(p), param_value(cfg.model, p));
    }
    if (!cfg.model_true.empty()) {
        o << "\n[model.true]\n";
        for (const auto& [p, v] : cfg.model_true) num(to_string(p), v);
    }

    o << "\n[controller]\n";
    kv("alpha", auto_text(cfg.controller.alpha));
    num("alpha_scale", cfg.controller.alpha_scale);
    num("k_p", cfg.controller.k_p);
    num("tau", cfg.controller.tau);
    kv("sign", cfg.controller.sign == IpSign::positive_feedback ? "positive" : "negative");

    o << "\n[pulse]\n";
    kv("period_J", std::to_string(cfg.pulse.period_J));
    kv("delta_S_nominal", auto_text(cfg.pulse.delta_S_nominal));
    num("u_max", cfg.pulse.u_max);

    o << "\n[reference]\n";
    kv("kind", std::string(to_string(cfg.reference.kind)));
    kv("y_start", auto_text(cfg.reference.y_start));
    kv("y_target", auto_text(cfg.reference.y_target));
    num("t_settle", cfg.reference.t_settle);

    o << "\n[grid]\n";
    num("t0", cfg.grid.t0);
    num("t_end", cfg.grid.t_end);
    num("h", cfg.grid.h);
    num("sample_every", cfg.grid.sample_every);

    if (cfg.montecarlo) {
        const auto& mc = *cfg.montecarlo;
        o << "\n[montecarlo]\n";
        kv("runs", std::to_string(mc.n_runs));
        num("lo", mc.lo);
        num("hi", mc.hi);
        kv("seed", std::to_string(mc.base_seed));
        kv("threads", std::to_string(mc.threads));
        std::string list;
        for (std::size_t i = 0; i < mc.perturbed.size(); ++i) {
            if (i) list += ", ";
            list += to_string(mc.perturbed[i]);
        }
        kv("perturbed", list);
    }

    if (cfg.epi) {
        const auto& e = *cfg.epi;
        o << "\n[epi]\n";
        num("bite_rate", e.params.bite_rate);
        num("p_v2h", e.params.p_v2h);
        num("p_h2v", e.params.p_h2v);
        num("host_pop", e.params.host_pop);
        num("recovery", e.params.recovery);
        num("vector_death", e.params.vector_death);
        num("target_margin", e.target_margin);
    }
    return o.str();
}

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::nominal: return "nominal";
        case ScenarioKind::j6: return "j6";
        case ScenarioKind::mismatch: return "mismatch";
        case ScenarioKind::custom: return "custom";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) {
    for (auto k : {ScenarioKind::nominal, ScenarioKind::j6, ScenarioKind::mismatch, ScenarioKind::custom}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::optional<double> epi_egg_target(const RunConfig& cfg) {
    if (!cfg.epi) return std::nullopt;
    cfg.epi->params.validate();
    const double margin = cfg.epi->target_margin;
    if (!(margin > 0.0) || !std::isfinite(margin)) throw InvalidParams("epi target_margin must be > 0");
    return egg_level_for_females(cfg.model, margin * critical_vector_pop(cfg.epi->params));
}

Scenario build_scenario(const RunConfig& cfg, ScenarioKind kind) {
    cfg.model.validate();
    Scenario s;
    s.name = std::string(to_string(kind));
    s.params_planner = cfg.model;
    s.params_true = cfg.model;
    if (kind == ScenarioKind::custom) {
        for (const auto& [p, v] : cfg.model_true) param_ref(s.params_true, p) = v;
    }
    if (kind == ScenarioKind::mismatch) s.params_true.delta_S = cfg.model.delta_S * kMismatchFactor;

    s.grid = cfg.grid;
    s.grid.validate();

    s.pulse.period_J = cfg.pulse.period_J;
    if (kind == ScenarioKind::nominal || kind == ScenarioKind::mismatch) s.pulse.period_J = 3;
    if (kind == ScenarioKind::j6) s.pulse.period_J = 6;
    s.pulse.delta_S_nominal = cfg.pulse.delta_S_nominal.value_or(s.params_planner.delta_S);
    s.pulse.u_max = cfg.pulse.u_max;

    s.controller.k_p = cfg.controller.k_p;
    s.controller.tau = cfg.controller.tau;
    s.controller.sign = cfg.controller.sign;
    if (cfg.controller.alpha) {
        s.controller.alpha = *cfg.controller.alpha;
    } else {
        s.controller.alpha = cfg.controller.alpha_scale * calibrate_alpha(s.params_planner, s.grid).alpha;
    }

    s.reference.kind = cfg.reference.kind;
    s.reference.t_settle = cfg.reference.t_settle;
    s.reference_from_initial_output = !cfg.reference.y_start.has_value();
    s.reference.y_start = cfg.reference.y_start.value_or(wild_equilibrium(s.params_true).state.x1);
    if (cfg.reference.y_target) {
        s.reference.y_target = *cfg.reference.y_target;
    } else if (const auto t = epi_egg_target(cfg)) {
        s.reference.y_target = *t;
    } else {
        s.reference.y_target = kDefaultTargetEggs;
    }

    if (cfg.epi) s.epi = cfg.epi->params;
    s.validate();
    return s;
}

}  // namespace sit
