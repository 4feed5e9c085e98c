#pragma once

#include <cstddef>
#include <vector>

#include "beam/vec3.hpp"

namespace beam {

// State of N macroparticles. q is the per-particle response charge entering
// the Lorentz force; Q is the per-particle source charge generating the self
// field (Q = 0 switches space charge off while keeping the particles charged
// with respect to external fields).
struct Bunch {
    std::vector<Vec3> x;  // positions [m]
    std::vector<Vec3> p;  // momenta [kg m/s]
    double q = 0.0;       // response charge per particle [C]
    double m = 0.0;       // mass per particle [kg]
    double Q = 0.0;       // self-field source charge per macroparticle [C]
    double t = 0.0;       // simulation clock [s]

    std::size_t size() const { return x.size(); }
};

double lorentz_gamma(const Vec3& p, double m);

// Centered rms bunch size along one axis (0,1,2).
double rms_size(const Bunch& b, int axis);

// Normalized statistical emittance sqrt(<u^2><p_u^2> - <u p_u>^2) / (m c)
// with centered moments. Throws DegenerateInput for N < 2.
double rms_emittance(const Bunch& b, int axis);

// Mean of (gamma - 1) m c^2 over particles, in eV.
double mean_kinetic_energy_ev(const Bunch& b);

// One diagnostics sample emitted by the scenario runner.
struct DiagnosticsRow {
    double t = 0.0;        // [s]
    double h = 0.0;        // outer step that produced this state [s]
    int m = 0;             // substeps of that outer step
    long solves = 0;       // cumulative self-field solves
    double rms[3] = {};    // rms sizes [m]
    double emit[3] = {};   // rms emittances [m rad]
    double mean_ke = 0.0;  // [eV]
    double max_accel = 0.0;  // [m/s^2]
};

DiagnosticsRow make_diagnostics_row(const Bunch& b, double h, int m, long solves,
                                    double max_accel);

}  // namespace beam
