#include "beam/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "beam/csv.hpp"
#include "beam/errors.hpp"

namespace beam {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

double transverse_emit(const Bunch& b) {
    return 0.5 * (rms_emittance(b, 0) + rms_emittance(b, 1));
}

// Collects (t, eps_x, eps_y) whenever the clock crosses the next multiple of
// t_check, within a quarter base step.
struct CheckpointRecorder {
    double t_check = 0.0;
    double tol = 0.0;
    long last_k = 0;
    std::vector<std::array<double, 3>> rows;

    void operator()(const Bunch& b, double, int, double) {
        const long k = std::lround(b.t / t_check);
        if (k > last_k && std::abs(b.t - k * t_check) < tol) {
            last_k = k;
            rows.push_back({b.t, rms_emittance(b, 0), rms_emittance(b, 1)});
        }
    }
};

// Max over checkpoints of the relative eps_x deviation from the reference.
double checkpoint_error(const std::vector<std::array<double, 3>>& rows,
                        const std::vector<std::array<double, 3>>& ref, double h_base) {
    if (rows.size() != ref.size())
        throw NumericalError("run missed an error checkpoint (" +
                             std::to_string(rows.size()) + " of " +
                             std::to_string(ref.size()) + " recorded)");
    double err = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i][0] - ref[i][0]) > 0.5 * h_base)
            throw NumericalError("checkpoint clocks diverged between runs");
        err = std::max(err, std::abs(rows[i][1] - ref[i][1]) / ref[i][1]);
    }
    return err;
}

// Adaptive run hitting an exact solver-call budget by bisecting the initial
// outer step (call count decreases monotonically with dt_outer_init).
RunResult amts_at_budget(const Bunch& b0, const Scenario& sc, int budget, double beta,
                         GKind g, long& calls_out) {
    IntegratorConfig cfg = sc.integ;
    cfg.method = Method::AMTS;
    cfg.beta = beta;
    cfg.g_kind = g;
    double dt0 = cfg.t_end / static_cast<double>(budget - 1);
    double lo = 0.0, hi = 0.0;
    bool has_lo = false, has_hi = false;
    for (int it = 0; it < 60; ++it) {
        auto solver = make_solver(sc.solver);
        cfg.dt_outer_init = dt0;
        RunResult r = run_integrator(b0, sc.fields, *solver, cfg);
        const long c = solver->calls();
        if (c == budget) {
            calls_out = c;
            return r;
        }
        if (c > budget) {
            lo = dt0;
            has_lo = true;
        } else {
            hi = dt0;
            has_hi = true;
        }
        dt0 = (has_lo && has_hi) ? 0.5 * (lo + hi)
                                 : dt0 * static_cast<double>(c) / budget;
    }
    throw NumericalError("could not calibrate the adaptive run to " +
                         std::to_string(budget) + " solves");
}

}  // namespace

RunOutputs run_scenario(const Scenario& sc) {
    const Bunch b0 = make_bunch(sc.bunch);
    auto solver = make_solver(sc.solver);
    RunOutputs out;
    out.diag.push_back(make_diagnostics_row(b0, 0.0, 0, 0, 0.0));
    const double period = sc.cadence > 0.0 ? 1.0 / sc.cadence : 0.0;
    double next_t = period;
    StepObserver obs = [&](const Bunch& b, double h, int m, double amax) {
        if (period <= 0.0) return;
        if (b.t + 1e-9 * period < next_t) return;
        out.diag.push_back(make_diagnostics_row(b, h, m, solver->calls(), amax));
        next_t = (std::floor((b.t + 1e-9 * period) / period) + 1.0) * period;
    };
    const auto t0 = Clock::now();
    RunResult res = run_integrator(b0, sc.fields, *solver, sc.integ, obs);
    out.wall_ms = ms_since(t0);
    if (out.diag.back().t != res.bunch.t) {
        const double amax = res.trace.empty() ? 0.0 : res.trace.back().max_accel;
        out.diag.push_back(make_diagnostics_row(res.bunch, 0.0, 0, solver->calls(), amax));
    }
    out.trace = std::move(res.trace);
    out.dtau = res.dtau;
    out.solves = solver->calls();
    out.final_bunch = std::move(res.bunch);
    return out;
}

void write_run_csvs(const RunOutputs& out, const std::string& out_dir) {
    {
        auto f = open_out(out_dir, "diagnostics.csv");
        csv::Writer w(f, {"t", "h", "m", "solves", "rms_x", "rms_y", "rms_z", "emit_x",
                          "emit_y", "emit_z", "mean_ke_ev", "max_accel"});
        for (const auto& r : out.diag)
            w.row({csv::cell(r.t), csv::cell(r.h), csv::cell(r.m), csv::cell(r.solves),
                   csv::cell(r.rms[0]), csv::cell(r.rms[1]), csv::cell(r.rms[2]),
                   csv::cell(r.emit[0]), csv::cell(r.emit[1]), csv::cell(r.emit[2]),
                   csv::cell(r.mean_ke), csv::cell(r.max_accel)});
    }
    {
        auto f = open_out(out_dir, "step_trace.csv");
        csv::Writer w(f, {"t0", "h", "m", "lambda", "max_accel", "limited"});
        for (const auto& r : out.trace)
            w.row({csv::cell(r.t0), csv::cell(r.h), csv::cell(r.m), csv::cell(r.lambda),
                   csv::cell(r.max_accel), csv::cell(r.limited ? 1 : 0)});
    }
}

ErrorVsWorkReport error_vs_work(const Scenario& sc,
                                const std::vector<std::string>& methods) {
    if (!(sc.integ.dt_inner > 0.0))
        throw std::invalid_argument("error-vs-work needs integrator.dt_inner");
    const double t_end = sc.integ.t_end;
    const double dt_inner = sc.integ.dt_inner;
    const Bunch b0 = make_bunch(sc.bunch);

    auto run_mts_steps = [&](long steps, long& calls_out, double& wall_out) {
        IntegratorConfig cfg = sc.integ;
        cfg.method = Method::MTS;
        cfg.h = t_end / static_cast<double>(steps);
        cfg.substeps = static_cast<int>(std::max(1L, std::lround(cfg.h / dt_inner)));
        auto solver = make_solver(sc.solver);
        const auto t0 = Clock::now();
        RunResult r = run_integrator(b0, sc.fields, *solver, cfg);
        wall_out = ms_since(t0);
        calls_out = solver->calls();
        return r;
    };

    ErrorVsWorkReport rep;
    RunResult ref = run_mts_steps(600, rep.ref_solves, rep.ref_wall_ms);
    rep.ref_emit = transverse_emit(ref.bunch);

    for (const std::string& method : methods) {
        double beta = sc.integ.beta;
        GKind g = GKind::Accel;
        bool adaptive = true;
        if (method == "mts") {
            adaptive = false;
        } else if (method == "amts") {
            beta = 1.0;
        } else if (method == "amts_beam") {
            g = GKind::BeamSize;
        } else if (method.rfind("amts_beta_", 0) == 0) {
            beta = std::stod(method.substr(10));
        } else {
            throw std::invalid_argument("unknown method '" + method + "'");
        }
        for (int budget : sc.budgets) {
            WorkPoint pt;
            pt.method = method;
            pt.budget = budget;
            const auto t0 = Clock::now();
            Bunch end;
            if (adaptive) {
                end = amts_at_budget(b0, sc, budget, beta, g, pt.solves).bunch;
            } else {
                double wall = 0.0;
                end = run_mts_steps(budget - 1, pt.solves, wall).bunch;
            }
            pt.wall_ms = ms_since(t0);
            pt.err = std::abs(transverse_emit(end) - rep.ref_emit) / rep.ref_emit;
            rep.points.push_back(pt);
        }
    }
    return rep;
}

void write_error_vs_work_csv(const ErrorVsWorkReport& rep, std::ostream& out) {
    csv::Writer w(out, {"method", "budget", "solves", "err"});
    w.row({"reference", csv::cell(rep.ref_solves), csv::cell(rep.ref_solves),
           csv::cell(0.0)});
    for (const auto& p : rep.points)
        w.row({p.method, csv::cell(p.budget), csv::cell(p.solves), csv::cell(p.err)});
}

MtsVsStaleReport mts_vs_stale(const Scenario& sc) {
    if (!(sc.integ.h > 0.0))
        throw std::invalid_argument("the refresh-period sweep needs integrator.h");
    const double h_base = sc.integ.h;
    const double t_end = sc.integ.t_end;
    const double t_check = t_end / static_cast<double>(sc.checkpoints);
    const Bunch b0 = make_bunch(sc.bunch);

    auto record = [&](Method method, int period, const Bunch& start, long& calls_out,
                      double& wall_out) {
        CheckpointRecorder rec{t_check, 0.25 * h_base, 0, {}};
        IntegratorConfig cfg = sc.integ;
        cfg.method = method;
        if (method == Method::MTS) {
            cfg.h = period * h_base;
            cfg.substeps = period;
        } else {
            cfg.h = h_base;
            cfg.stale_period = period;
        }
        auto solver = make_solver(sc.solver);
        const auto t0 = Clock::now();
        run_integrator(start, sc.fields, *solver, cfg, std::ref(rec));
        wall_out = ms_since(t0);
        calls_out = solver->calls();
        return rec.rows;
    };

    MtsVsStaleReport rep;
    long calls = 0;
    double wall = 0.0;
    rep.reference = record(Method::MTS, 1, b0, calls, wall);
    if (static_cast<int>(rep.reference.size()) != sc.checkpoints)
        throw NumericalError("reference run recorded " +
                             std::to_string(rep.reference.size()) + " of " +
                             std::to_string(sc.checkpoints) + " checkpoints");

    for (int m : sc.periods) {
        const auto rows = record(Method::MTS, m, b0, calls, wall);
        rep.rows.push_back(
            {"mts", m, calls, checkpoint_error(rows, rep.reference, h_base), wall});
    }
    for (int n : sc.periods) {
        const auto rows = record(Method::BBStale, n, b0, calls, wall);
        rep.rows.push_back(
            {"stale", n, calls, checkpoint_error(rows, rep.reference, h_base), wall});
    }
    Bunch neutral = b0;
    neutral.Q = 0.0;
    const auto rows = record(Method::BBStale, 1, neutral, calls, wall);
    rep.rows.push_back({"no_space_charge", 1, calls,
                        checkpoint_error(rows, rep.reference, h_base), wall});
    return rep;
}

void write_mts_vs_stale_csv(const MtsVsStaleReport& rep, std::ostream& out) {
    csv::Writer w(out, {"table", "period", "solves", "err"});
    for (const auto& r : rep.rows)
        w.row({r.table, csv::cell(r.period), csv::cell(r.solves), csv::cell(r.err)});
}

void write_beta_sweep_csv(const std::vector<model1d::SweepRow>& rows, std::ostream& out) {
    csv::Writer w(out, {"H", "beta", "steps_taken", "dt0", "err_x", "err_v", "err_max",
                        "broke_down"});
    for (const auto& r : rows)
        w.row({csv::cell(r.H), csv::cell(r.beta), csv::cell(r.steps), csv::cell(r.dt0),
               csv::cell(r.err_x), csv::cell(r.err_v), csv::cell(r.err),
               csv::cell(r.broke ? 1 : 0)});
}

}  // namespace beam
