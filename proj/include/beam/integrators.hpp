#pragma once

#include <functional>
#include <vector>

#include "beam/bunch.hpp"
#include "beam/fields.hpp"
#include "beam/self_field.hpp"

namespace beam {

// Half-step/full-step building blocks. drift advances positions and the
// clock; kick applies the Boris-Buneman momentum update (half electric kick,
// magnetic rotation, half electric kick) with per-particle fields.
void drift(double h, Bunch& b);
void kick(double h, Bunch& b, const std::vector<Vec3>& e, const std::vector<Vec3>& bf);

// One velocity-Verlet-style step under external fields only, sampled at the
// mid-step positions and clock: drift(h/2) kick(h) drift(h/2).
void bb_ext(double h, Bunch& b, const ExternalFieldModel& ext);

// One multiple-time-stepping outer step: half self kick with the cached
// solve, m external substeps of size h/m, fresh solve, half self kick.
// Returns the fresh solve for reuse as the next step's cache.
SelfFieldResult step_mts(double h, int m, Bunch& b, const ExternalFieldModel& ext,
                         SelfFieldSolver& solver, const SelfFieldResult& cached);

// Step-size controllers for the adaptive scheme.
double g_accel(double max_accel, double beta, double floor = 1e-20);
double g_beamsize(const Bunch& b);

struct StepRecord {
    double t0 = 0.0;         // clock at the start of the step
    double h = 0.0;          // outer step actually taken
    int m = 1;               // substeps
    double lambda = 0.0;     // controller value that produced h
    double max_accel = 0.0;  // trailing solve's max acceleration used for lambda
    bool limited = false;    // clamped by h_min/h_max or end-of-run truncation
};
using StepTrace = std::vector<StepRecord>;

using StepObserver =
    std::function<void(const Bunch&, double h, int m, double max_accel)>;

enum class Method { BB, BBStale, MTS, AMTS };
enum class GKind { Accel, BeamSize };

struct IntegratorConfig {
    Method method = Method::BB;
    double t_end = 0.0;
    double h = 0.0;              // BB/BBStale step, MTS outer step
    int stale_period = 1;        // BBStale: reuse the self field this many steps
    int substeps = 1;            // MTS: external substeps per outer step
    double dt_outer_init = 0.0;  // AMTS
    double dt_inner = 0.0;       // AMTS target substep
    double beta = 1.0;           // AMTS controller exponent
    double h_min = 0.0;          // AMTS clamp; 0 -> dt_inner
    double h_max = 0.0;          // AMTS clamp; 0 -> 1e4 * dt_inner
    GKind g_kind = GKind::Accel;
};

struct RunResult {
    Bunch bunch;
    long steps = 0;     // outer steps taken
    StepTrace trace;    // AMTS per-step records (empty otherwise)
    double dtau = 0.0;  // AMTS rescaled step (0 otherwise)
};

RunResult run_integrator(const Bunch& b0, const ExternalFieldModel& ext,
                         SelfFieldSolver& solver, const IntegratorConfig& cfg,
                         const StepObserver& obs = {});

}  // namespace beam
