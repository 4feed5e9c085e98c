#include "beam/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "beam/constants.hpp"
#include "beam/errors.hpp"

namespace beam {

namespace {

// The runners stop once the remaining time falls below the floating-point
// resolution of the clock; otherwise a truncated final step whose half-drift
// increment is below one ulp of t could spin forever.
bool time_left(double t, double t_end) { return t_end - t > 1e-12 * t_end; }

void add_external(const ExternalFieldModel& ext, const Bunch& b,
                  std::vector<Vec3>& e, std::vector<Vec3>& bf) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        const FieldSample s = eval_external(ext, b.x[i], b.t);
        e[i] += s.e;
        bf[i] += s.b;
    }
}

RunResult run_bb(Bunch b, const ExternalFieldModel& ext, SelfFieldSolver& solver,
                 double h, double t_end, int stale_n, const StepObserver& obs) {
    RunResult out;
    long step = 0;
    SelfFieldResult cache;
    bool have_cache = false;
    std::vector<Vec3> e(b.size()), bf(b.size());
    while (time_left(b.t, t_end)) {
        const double hs = std::min(h, t_end - b.t);
        drift(hs / 2.0, b);
        if (step % stale_n == 0 || !have_cache) {
            cache = solver.solve(b);
            have_cache = true;
        }
        e = cache.e;
        bf = cache.b;
        add_external(ext, b, e, bf);
        kick(hs, b, e, bf);
        drift(hs / 2.0, b);
        ++step;
        if (obs) obs(b, hs, 1, cache.max_accel);
    }
    out.bunch = std::move(b);
    out.steps = step;
    return out;
}

RunResult run_mts(Bunch b, const ExternalFieldModel& ext, SelfFieldSolver& solver,
                  double h, int m, double t_end, const StepObserver& obs) {
    RunResult out;
    long step = 0;
    SelfFieldResult cached = solver.solve(b);
    while (time_left(b.t, t_end)) {
        const double hs = std::min(h, t_end - b.t);
        cached = step_mts(hs, m, b, ext, solver, cached);
        ++step;
        if (obs) obs(b, hs, m, cached.max_accel);
    }
    out.bunch = std::move(b);
    out.steps = step;
    return out;
}

RunResult run_amts(Bunch b, const ExternalFieldModel& ext, SelfFieldSolver& solver,
                   const IntegratorConfig& cfg, const StepObserver& obs) {
    const double h_min = cfg.h_min > 0.0 ? cfg.h_min : cfg.dt_inner;
    const double h_max = cfg.h_max > 0.0 ? cfg.h_max : 1e4 * cfg.dt_inner;
    RunResult out;
    SelfFieldResult cached = solver.solve(b);
    auto controller = [&](const SelfFieldResult& res) {
        return cfg.g_kind == GKind::Accel ? g_accel(res.max_accel, cfg.beta)
                                          : g_beamsize(b);
    };
    const double lam0 = controller(cached);
    if (!(std::isfinite(lam0)) || lam0 <= 0.0)
        throw NumericalError("adaptive controller produced invalid initial scale");
    out.dtau = cfg.dt_outer_init / lam0;
    long step = 0;
    while (time_left(b.t, cfg.t_end)) {
        const double lam = controller(cached);
        double h = lam * out.dtau;
        if (!std::isfinite(h) || h <= 0.0)
            throw NumericalError("adaptive step broke down at step " + std::to_string(step));
        bool limited = false;
        if (h < h_min) {
            h = h_min;
            limited = true;
        }
        if (h > h_max) {
            h = h_max;
            limited = true;
        }
        if (b.t + h > cfg.t_end) {
            h = cfg.t_end - b.t;
            limited = true;
        }
        const int m = static_cast<int>(std::max(1L, std::lround(h / cfg.dt_inner)));
        const double t0 = b.t;
        const double amax = cached.max_accel;
        cached = step_mts(h, m, b, ext, solver, cached);
        out.trace.push_back({t0, h, m, lam, amax, limited});
        ++step;
        if (obs) obs(b, h, m, amax);
    }
    out.bunch = std::move(b);
    out.steps = step;
    return out;
}

}  // namespace

void drift(double h, Bunch& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double g = lorentz_gamma(b.p[i], b.m);
        b.x[i] += b.p[i] * (h / (b.m * g));
    }
    b.t += h;
}

void kick(double h, Bunch& b, const std::vector<Vec3>& e, const std::vector<Vec3>& bf) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        Vec3& p = b.p[i];
        p += e[i] * (0.5 * h * b.q);
        const double g = lorentz_gamma(p, b.m);
        const Vec3 r = bf[i] * (0.5 * h * b.q / (b.m * g));
        const Vec3 w = p + cross(p, r);
        const Vec3 s = r * (2.0 / (1.0 + dot(r, r)));
        p += cross(w, s);
        p += e[i] * (0.5 * h * b.q);
    }
}

void bb_ext(double h, Bunch& b, const ExternalFieldModel& ext) {
    drift(h / 2.0, b);
    std::vector<Vec3> e(b.size()), bf(b.size());
    add_external(ext, b, e, bf);
    kick(h, b, e, bf);
    drift(h / 2.0, b);
}

SelfFieldResult step_mts(double h, int m, Bunch& b, const ExternalFieldModel& ext,
                         SelfFieldSolver& solver, const SelfFieldResult& cached) {
    kick(h / 2.0, b, cached.e, cached.b);
    for (int s = 0; s < m; ++s) bb_ext(h / m, b, ext);
    SelfFieldResult fresh = solver.solve(b);
    kick(h / 2.0, b, fresh.e, fresh.b);
    return fresh;
}

double g_accel(double max_accel, double beta, double floor) {
    return std::pow(std::max(max_accel, floor), -beta / 2.0);
}

double g_beamsize(const Bunch& b) {
    Vec3 mean{0, 0, 0};
    for (const auto& x : b.x) mean += x;
    mean *= 1.0 / static_cast<double>(b.size());
    double s = 0.0;
    for (const auto& x : b.x) s += norm2(x - mean);
    return std::sqrt(s / static_cast<double>(b.size()));
}

RunResult run_integrator(const Bunch& b0, const ExternalFieldModel& ext,
                         SelfFieldSolver& solver, const IntegratorConfig& cfg,
                         const StepObserver& obs) {
    switch (cfg.method) {
        case Method::BB:
            if (!(cfg.h > 0.0)) throw std::invalid_argument("step size must be positive");
            return run_bb(b0, ext, solver, cfg.h, cfg.t_end, 1, obs);
        case Method::BBStale:
            if (!(cfg.h > 0.0)) throw std::invalid_argument("step size must be positive");
            if (cfg.stale_period < 1)
                throw std::invalid_argument("stale period must be >= 1");
            return run_bb(b0, ext, solver, cfg.h, cfg.t_end, cfg.stale_period, obs);
        case Method::MTS:
            if (!(cfg.h > 0.0)) throw std::invalid_argument("step size must be positive");
            if (cfg.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
            return run_mts(b0, ext, solver, cfg.h, cfg.substeps, cfg.t_end, obs);
        case Method::AMTS:
            if (!(cfg.dt_inner > 0.0) || !(cfg.dt_outer_init > 0.0))
                throw std::invalid_argument("adaptive steps must be positive");
            return run_amts(b0, ext, solver, cfg, obs);
    }
    throw std::invalid_argument("unknown integration method");
}

}  // namespace beam
