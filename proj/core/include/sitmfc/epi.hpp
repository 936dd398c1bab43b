#pragma once

// Ross-MacDonald transmission threshold.

#include "sitmfc/plant.hpp"

namespace sit {

struct EpiParams {
    double bite_rate = 0.3;     // vector biting rate, 1/day
    double p_v2h = 0.5;         // vector-to-host transmission per bite
    double p_h2v = 0.5;         // host-to-vector transmission per bite
    double host_pop = 1000.0;   // human population
    double recovery = 0.1;      // human recovery rate, 1/day
    double vector_death = 0.1;  // vector death rate, 1/day

    void validate() const;

    friend bool operator==(const EpiParams&, const EpiParams&) = default;
};

/// R0 = bite_rate^2 p_v2h p_h2v V / (recovery vector_death host_pop).
double r0(const EpiParams& params, double vector_pop);

/// Vector population at which R0 = 1. Throws InvalidParams when no
/// transmission is possible (bite_rate p_v2h p_h2v = 0).
double critical_vector_pop(const EpiParams& params);

/// Egg level whose steady state carries `females` fertilized females,
/// from the egg balance beta_E x3 (1 - x1/K) = (nu_E + delta_E) x1. This
/// relation holds at every steady state regardless of the sterile stock.
double egg_level_for_females(const ModelParams& model, double females);

/// Fertilized females sustained at steady state by `eggs` eggs (inverse of
/// egg_level_for_females).
double females_for_egg_level(const ModelParams& model, double eggs);

}  // namespace sit
