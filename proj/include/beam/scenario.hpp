#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beam/bunch.hpp"
#include "beam/fields.hpp"
#include "beam/integrators.hpp"
#include "beam/self_field.hpp"

namespace beam {

// Initial-bunch recipe. Particles are electrons; the per-particle response
// charge is -q_e and the self-field source charge is total_charge / n, so
// total_charge = 0 disables space charge without neutralizing the particles.
struct BunchSpec {
    enum class Dist { Gaussian, ColdSphere };
    Dist dist = Dist::Gaussian;
    std::size_t n = 1;
    double sigma[3] = {1e-3, 1e-3, 1e-3};  // Gaussian rms sizes [m]
    double momentum_spread = 0.0;          // Gaussian sigma_p / (m c), isotropic
    double radius = 1e-3;                  // cold sphere radius [m]
    double total_charge = 0.0;             // [C]
    double kinetic_energy_ev = 0.0;        // mean longitudinal kinetic energy
    std::uint64_t seed = 1;
};

// Deterministic for a fixed seed on every platform: positions are drawn
// first (per particle, x then y then z), then momenta; cold distributions
// consume no momentum draws.
Bunch make_bunch(const BunchSpec& spec);

struct Scenario {
    BunchSpec bunch;
    ExternalFieldModel fields;
    SelfFieldConfig solver;
    IntegratorConfig integ;
    double cadence = 0.0;  // diagnostics rows per unit time (0: first/last only)
    std::vector<int> budgets = {25, 50, 100, 200};  // error-vs-work solve grid
    std::vector<int> periods = {1, 2, 4, 10, 20, 100};  // m/n sweep values
    int checkpoints = 3;  // equally spaced error-sampling points
};

// Parses and validates a scenario config; throws ConfigError (with the
// offending line) on unknown sections/keys, bad values, or missing fields.
Scenario load_scenario(const std::string& path);
Scenario load_scenario_text(const std::string& text);

}  // namespace beam
