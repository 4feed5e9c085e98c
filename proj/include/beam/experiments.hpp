#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "beam/bunch.hpp"
#include "beam/model1d.hpp"
#include "beam/scenario.hpp"

namespace beam {

// One scenario integration with diagnostics sampled at the configured
// cadence (plus the initial and final states) and, for the adaptive method,
// the per-step trace.
struct RunOutputs {
    std::vector<DiagnosticsRow> diag;
    StepTrace trace;
    double dtau = 0.0;  // adaptive method's rescaled step
    long solves = 0;
    double wall_ms = 0.0;
    Bunch final_bunch;
};

RunOutputs run_scenario(const Scenario& sc);

// Writes diagnostics.csv and step_trace.csv into out_dir (created if absent).
void write_run_csvs(const RunOutputs& out, const std::string& out_dir);

// Final transverse-emittance error against a fine reference at matched
// self-field-solve budgets.
struct WorkPoint {
    std::string method;  // mts | amts | amts_beam | amts_beta_<x>
    int budget = 0;      // requested solve count
    long solves = 0;     // actual solver calls
    double err = 0.0;    // relative error of (eps_x + eps_y)/2 at t_end
    double wall_ms = 0.0;
};

struct ErrorVsWorkReport {
    long ref_solves = 0;
    double ref_emit = 0.0;
    double ref_wall_ms = 0.0;
    std::vector<WorkPoint> points;
};

ErrorVsWorkReport error_vs_work(const Scenario& sc,
                                const std::vector<std::string>& methods);
void write_error_vs_work_csv(const ErrorVsWorkReport& rep, std::ostream& out);

// Self-field refresh-period sweep: proper multiple-time-stepping (outer step
// m*h with m substeps) against stale-force reuse (step h, solve every n-th
// step), errors sampled at equally spaced checkpoints against the m = 1 run.
struct PeriodRow {
    std::string table;  // mts | stale | no_space_charge
    int period = 0;
    long solves = 0;
    double err = 0.0;
    double wall_ms = 0.0;
};

struct MtsVsStaleReport {
    std::vector<std::array<double, 3>> reference;  // t, eps_x, eps_y
    std::vector<PeriodRow> rows;
};

MtsVsStaleReport mts_vs_stale(const Scenario& sc);
void write_mts_vs_stale_csv(const MtsVsStaleReport& rep, std::ostream& out);

void write_beta_sweep_csv(const std::vector<model1d::SweepRow>& rows, std::ostream& out);

}  // namespace beam
