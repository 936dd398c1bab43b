#include "sitmfc/epi.hpp"

#include <cmath>
#include <string>

#include "sitmfc/error.hpp"

namespace sit {

void EpiParams::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams(std::string("epi ") + name + " must lie in [0, 1]");
    };
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParams(std::string("epi ") + name + " must be > 0");
    };
    pos(bite_rate, "bite_rate");
    prob(p_v2h, "p_v2h");
    prob(p_h2v, "p_h2v");
    pos(host_pop, "host_pop");
    pos(recovery, "recovery");
    pos(vector_death, "vector_death");
}

double r0(const EpiParams& p, double vector_pop) {
    if (vector_pop < 0.0) throw InvalidParams("r0: vector population must be >= 0");
    return p.bite_rate * p.bite_rate * p.p_v2h * p.p_h2v * vector_pop / (p.recovery * p.vector_death * p.host_pop);
}

double critical_vector_pop(const EpiParams& p) {
    const double transmission = p.bite_rate * p.bite_rate * p.p_v2h * p.p_h2v;
    if (!(transmission > 0.0)) {
        throw InvalidParams("critical_vector_pop: no transmission possible, V_c is unbounded");
    }
    return p.recovery * p.vector_death * p.host_pop / transmission;
}

double egg_level_for_females(const ModelParams& m, double females) {
    const double laying = m.beta_E * females;
    return laying * m.cap_K / (laying + (m.nu_E + m.delta_E) * m.cap_K);
}

double females_for_egg_level(const ModelParams& m, double eggs) {
    if (eggs >= m.cap_K) throw InvalidParams("females_for_egg_level: egg level must be below carrying capacity");
    return (m.nu_E + m.delta_E) * eggs / (m.beta_E * (1.0 - eggs / m.cap_K));
}

}  // namespace sit
