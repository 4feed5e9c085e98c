#include <doctest.h>

#include <cmath>
#include <vector>

#include "beam/constants.hpp"
#include "beam/errors.hpp"
#include "beam/integrators.hpp"
#include "beam/scenario.hpp"

using namespace beam;

namespace {

Bunch one_particle(const Vec3& x, const Vec3& p, double q = phys::q_e) {
    Bunch b;
    b.q = q;
    b.m = phys::m_e;
    b.Q = 0.0;
    b.x = {x};
    b.p = {p};
    return b;
}

const ExternalFieldModel kNoField{};

}  // namespace

TEST_CASE("drift leaves resting particles in place and advances the clock") {
    Bunch b = one_particle(Vec3{1, 2, 3}, Vec3{0, 0, 0});
    drift(2.5e-12, b);
    CHECK(b.x[0].x == 1.0);
    CHECK(b.x[0].y == 2.0);
    CHECK(b.x[0].z == 3.0);
    CHECK(b.t == 2.5e-12);
}

TEST_CASE("drift is reversible") {
    Bunch b = one_particle(Vec3{1e-3, -2e-3, 0}, Vec3{1e-23, 2e-23, -5e-24});
    const Vec3 x0 = b.x[0];
    drift(1e-10, b);
    drift(-1e-10, b);
    CHECK(std::abs(b.x[0].x - x0.x) <= 1e-15 * std::abs(x0.x));
    CHECK(std::abs(b.x[0].y - x0.y) <= 1e-15 * std::abs(x0.y));
    CHECK(b.t == 0.0);
}

TEST_CASE("drift at momentum mc covers c/sqrt(2) per second") {
    const double mc = phys::m_e * phys::c;
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{mc, 0, 0});
    drift(1.0, b);
    CHECK(b.x[0].x == doctest::Approx(phys::c / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(b.x[0].y == 0.0);
}

TEST_CASE("kick without magnetic field is a plain electric impulse") {
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{1e-24, 0, 0});
    const double h = 1e-12;
    const Vec3 e0{1e6, -2e6, 0.5e6};
    kick(h, b, {e0}, {Vec3{0, 0, 0}});
    CHECK(b.p[0].x == doctest::Approx(1e-24 + h * b.q * e0.x).epsilon(1e-15).scale(0.0));
    CHECK(b.p[0].y == doctest::Approx(h * b.q * e0.y).epsilon(1e-15).scale(0.0));
    CHECK(b.p[0].z == doctest::Approx(h * b.q * e0.z).epsilon(1e-15).scale(0.0));
}

TEST_CASE("kick with pure magnetic field preserves momentum magnitude") {
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{3e-23, -1e-23, 2e-23});
    const double p0 = norm(b.p[0]);
    for (int s = 0; s < 100; ++s)
        kick(1e-12, b, {Vec3{0, 0, 0}}, {Vec3{0.02, -0.05, 0.1}});
    CHECK(std::abs(norm(b.p[0]) - p0) <= 1e-13 * p0);
}

TEST_CASE("kick with b = B z^ matches the rotation-matrix oracle") {
    const double B = 0.3, h = 2e-12;
    const double p0 = 4e-23;
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{p0, 0, 0});
    const double g = lorentz_gamma(b.p[0], b.m);
    const double theta = 2.0 * std::atan(h * b.q * B / (2.0 * b.m * g));
    kick(h, b, {Vec3{0, 0, 0}}, {Vec3{0, 0, B}});
    // Boris update rotates p about the field axis by -theta.
    CHECK(b.p[0].x == doctest::Approx(p0 * std::cos(theta)).epsilon(1e-13).scale(0.0));
    CHECK(b.p[0].y == doctest::Approx(-p0 * std::sin(theta)).epsilon(1e-13).scale(0.0));
    CHECK(b.p[0].z == 0.0);
    CHECK(norm(b.p[0]) == doctest::Approx(p0).epsilon(1e-14).scale(0.0));
}

TEST_CASE("field-free step equals a single drift") {
    Bunch b = one_particle(Vec3{1e-3, 0, 0}, Vec3{2e-23, 1e-23, 0});
    DirectSumSolver solver(1e-6);
    IntegratorConfig cfg;
    cfg.method = Method::BB;
    cfg.h = 1e-12;
    cfg.t_end = 1e-12;
    const RunResult r = run_integrator(b, kNoField, solver, cfg);
    Bunch d = b;
    drift(1e-12, d);
    CHECK(r.bunch.x[0].x == doctest::Approx(d.x[0].x).epsilon(1e-15).scale(0.0));
    CHECK(r.bunch.x[0].y == doctest::Approx(d.x[0].y).epsilon(1e-15).scale(0.0));
    CHECK(r.bunch.p[0].x == d.p[0].x);
}

TEST_CASE("gyro orbit closes with the expected radius") {
    const double B = 0.1;
    const double p0 = 1e-23;
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{p0, 0, 0});
    const double g = lorentz_gamma(b.p[0], b.m);
    const double period = 2.0 * 3.14159265358979323846 * b.m * g / (b.q * B);
    const double radius = p0 / (b.q * B);
    ExternalFieldModel field{{UniformB{Vec3{0, 0, B}}}};
    DirectSumSolver solver(1e-6);
    IntegratorConfig cfg;
    cfg.method = Method::BB;
    cfg.h = period / 400.0;
    cfg.t_end = period;
    double max_r = 0.0, min_r = 1e300;
    StepObserver obs = [&](const Bunch& s, double, int, double) {
        // distance from the orbit center (0, -radius)
        const double dx = s.x[0].x, dy = s.x[0].y + radius;
        const double r = std::sqrt(dx * dx + dy * dy);
        max_r = std::max(max_r, r);
        min_r = std::min(min_r, r);
    };
    const RunResult r = run_integrator(b, field, solver, cfg, obs);
    CHECK(max_r == doctest::Approx(radius).epsilon(1e-3).scale(0.0));
    CHECK(min_r == doctest::Approx(radius).epsilon(1e-3).scale(0.0));
    CHECK(norm(r.bunch.x[0]) < 1e-3 * radius);  // back at the start
}

TEST_CASE("external fields are sampled at the mid-step clock") {
    const double omega = 3e9, e0 = 2e6, h = 1e-12;
    ExternalFieldModel gap{{RFGap{0.0, e0, omega, 0.4, 1.0}}};
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{0, 0, 0});
    DirectSumSolver solver(1e-6);
    IntegratorConfig cfg;
    cfg.method = Method::BB;
    cfg.h = h;
    cfg.t_end = h;
    const RunResult r = run_integrator(b, gap, solver, cfg);
    const double expected = h * b.q * e0 * std::cos(omega * (h / 2.0) + 0.4);
    CHECK(r.bunch.p[0].z == doctest::Approx(expected).epsilon(1e-14).scale(0.0));
}

TEST_CASE("stale period one is bitwise identical to the plain integrator") {
    BunchSpec spec;
    spec.n = 24;
    spec.sigma[0] = spec.sigma[1] = spec.sigma[2] = 1e-3;
    spec.total_charge = -1e-11;
    spec.seed = 4;
    const Bunch b0 = make_bunch(spec);
    IntegratorConfig cfg;
    cfg.method = Method::BB;
    cfg.h = 1e-12;
    cfg.t_end = 20e-12;
    DirectSumSolver s1(1e-5), s2(1e-5);
    const RunResult plain = run_integrator(b0, kNoField, s1, cfg);
    cfg.method = Method::BBStale;
    cfg.stale_period = 1;
    const RunResult stale = run_integrator(b0, kNoField, s2, cfg);
    for (std::size_t i = 0; i < b0.size(); ++i) {
        CHECK(plain.bunch.x[i].x == stale.bunch.x[i].x);
        CHECK(plain.bunch.x[i].y == stale.bunch.x[i].y);
        CHECK(plain.bunch.x[i].z == stale.bunch.x[i].z);
        CHECK(plain.bunch.p[i].x == stale.bunch.p[i].x);
        CHECK(plain.bunch.p[i].y == stale.bunch.p[i].y);
        CHECK(plain.bunch.p[i].z == stale.bunch.p[i].z);
    }
}

TEST_CASE("without space charge the stale period is irrelevant") {
    BunchSpec spec;
    spec.n = 8;
    spec.total_charge = 0.0;
    spec.seed = 6;
    const Bunch b0 = make_bunch(spec);
    ExternalFieldModel field{{UniformB{Vec3{0, 0, 0.1}}}};
    IntegratorConfig cfg;
    cfg.method = Method::BBStale;
    cfg.h = 1e-12;
    cfg.t_end = 30e-12;
    DirectSumSolver s1(1e-6), s2(1e-6);
    cfg.stale_period = 1;
    const RunResult a = run_integrator(b0, field, s1, cfg);
    cfg.stale_period = 5;
    const RunResult b = run_integrator(b0, field, s2, cfg);
    for (std::size_t i = 0; i < b0.size(); ++i) {
        CHECK(a.bunch.x[i].x == b.bunch.x[i].x);
        CHECK(a.bunch.p[i].y == b.bunch.p[i].y);
    }
}

TEST_CASE("stale reuse overestimates the momentum gain of an expanding pair") {
    Bunch pair;
    pair.q = -phys::q_e;
    pair.m = phys::m_e;
    pair.Q = -1e-12;
    pair.x = {Vec3{-5e-5, 0, 0}, Vec3{5e-5, 0, 0}};
    pair.p.assign(2, Vec3{0, 0, 0});
    IntegratorConfig cfg;
    cfg.h = 1e-12;
    cfg.t_end = 40e-12;
    DirectSumSolver s1(1e-7), s2(1e-7);
    cfg.method = Method::BB;
    const RunResult fresh = run_integrator(pair, kNoField, s1, cfg);
    cfg.method = Method::BBStale;
    cfg.stale_period = 2;
    const RunResult stale = run_integrator(pair, kNoField, s2, cfg);
    // The pair separates; a reused force was sampled at smaller separation,
    // hence stronger, so the stale run gains more momentum.
    CHECK(stale.bunch.p[0].x < fresh.bunch.p[0].x);  // particle 0 pushed to -x
    CHECK(norm(stale.bunch.p[1]) > norm(fresh.bunch.p[1]));
}

TEST_CASE("substep count is irrelevant without external fields") {
    BunchSpec spec;
    spec.n = 8;
    spec.sigma[0] = spec.sigma[1] = spec.sigma[2] = 1e-3;
    spec.total_charge = -1e-10;
    spec.seed = 12;
    const Bunch b0 = make_bunch(spec);
    IntegratorConfig cfg;
    cfg.method = Method::MTS;
    cfg.h = 2e-12;
    cfg.t_end = 20e-12;
    DirectSumSolver s1(1e-5), s8(1e-5);
    cfg.substeps = 1;
    const RunResult m1 = run_integrator(b0, kNoField, s1, cfg);
    cfg.substeps = 8;
    const RunResult m8 = run_integrator(b0, kNoField, s8, cfg);
    double scale = 0.0;
    for (std::size_t i = 0; i < b0.size(); ++i) scale = std::max(scale, norm(m1.bunch.x[i]));
    for (std::size_t i = 0; i < b0.size(); ++i)
        CHECK(norm(m1.bunch.x[i] - m8.bunch.x[i]) <= 1e-12 * scale);
}

TEST_CASE("splitting difference to the plain step shrinks as h cubed") {
    Bunch pair;
    pair.q = -phys::q_e;
    pair.m = phys::m_e;
    pair.Q = -1e-13;
    pair.x = {Vec3{-1e-4, 0, 0}, Vec3{1e-4, 0, 0}};
    pair.p.assign(2, Vec3{0, 0, 0});
    ExternalFieldModel field{{UniformE{Vec3{0, 0, 1e5}}}};
    auto gap = [&](double h) {
        IntegratorConfig cfg;
        cfg.t_end = h;
        cfg.h = h;
        DirectSumSolver sa(1e-6), sb(1e-6);
        cfg.method = Method::BB;
        const RunResult bb = run_integrator(pair, field, sa, cfg);
        cfg.method = Method::MTS;
        cfg.substeps = 1;
        const RunResult mts = run_integrator(pair, field, sb, cfg);
        double d = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            d = std::max(d, norm(bb.bunch.p[i] - mts.bunch.p[i]));
        return d;
    };
    const double dh = gap(4e-12);
    const double dh2 = gap(2e-12);
    CHECK(dh / dh2 > 6.0);
    CHECK(dh / dh2 < 10.0);
}

TEST_CASE("without space charge the multirate step is plain substepping") {
    Bunch b = one_particle(Vec3{1e-4, 0, 0}, Vec3{2e-23, 0, 1e-23});
    ExternalFieldModel field{{UniformB{Vec3{0, 0, 0.2}}}};
    IntegratorConfig cfg;
    cfg.method = Method::MTS;
    cfg.h = 4e-12;
    cfg.substeps = 4;
    cfg.t_end = 40e-12;
    DirectSumSolver s1(1e-6), s2(1e-6);
    const RunResult mts = run_integrator(b, field, s1, cfg);
    cfg.method = Method::BB;
    cfg.h = 1e-12;
    const RunResult bb = run_integrator(b, field, s2, cfg);
    CHECK(norm(mts.bunch.x[0] - bb.bunch.x[0]) <= 1e-14 * norm(bb.bunch.x[0]));
    CHECK(norm(mts.bunch.p[0] - bb.bunch.p[0]) <= 1e-14 * norm(bb.bunch.p[0]));
}

TEST_CASE("step controller values") {
    CHECK(g_accel(4.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15).scale(0.0));
    const double a = 7.3e5;
    CHECK(g_accel(a, 2.0) == doctest::Approx(1.0 / a).epsilon(1e-14).scale(0.0));
    // acceleration floor: vanishing field maps to the floor's scale
    CHECK(g_accel(0.0, 1.0) == doctest::Approx(1e10).epsilon(1e-12));
}

TEST_CASE("adaptive method reduces to fixed substepping without space charge") {
    Bunch b = one_particle(Vec3{0, 0, 0}, Vec3{3e-23, 0, 0});
    Bunch pairless = b;  // single particle: self field identically zero
    ExternalFieldModel field{{UniformB{Vec3{0, 0, 0.1}}}};
    IntegratorConfig cfg;
    cfg.method = Method::AMTS;
    cfg.dt_outer_init = 1.3e-12;
    cfg.dt_inner = 5e-13;
    cfg.t_end = 13e-12;
    DirectSumSolver s1(1e-6), s2(1e-6);
    const RunResult ad = run_integrator(pairless, field, s1, cfg);
    // constant h = dt_outer_init and m = round(1.3e-12 / 5e-13) = round(2.6) = 3
    REQUIRE(ad.trace.size() == 10);
    for (const auto& row : ad.trace) {
        CHECK(row.h == doctest::Approx(1.3e-12).epsilon(1e-12).scale(0.0));
        CHECK(row.m == 3);
        // inner step fluctuates around the target: 1.3e-12 / 3 = 4.33e-13
        CHECK(row.h / row.m == doctest::Approx(4.333333333333333e-13).epsilon(1e-12).scale(0.0));
    }
    IntegratorConfig fixed;
    fixed.method = Method::MTS;
    fixed.h = 1.3e-12;
    fixed.substeps = 3;
    fixed.t_end = 13e-12;
    const RunResult mt = run_integrator(b, field, s2, fixed);
    CHECK(norm(ad.bunch.p[0] - mt.bunch.p[0]) <= 1e-12 * norm(mt.bunch.p[0]));
}

TEST_CASE("expanding cold bunch: step size grows as the field decays") {
    BunchSpec spec;
    spec.n = 32;
    spec.sigma[0] = spec.sigma[1] = spec.sigma[2] = 0.5e-3;
    spec.total_charge = -1e-10;
    spec.seed = 21;
    const Bunch b0 = make_bunch(spec);
    IntegratorConfig cfg;
    cfg.method = Method::AMTS;
    cfg.dt_outer_init = 4e-12;
    cfg.dt_inner = 1e-12;
    cfg.t_end = 4e-10;
    DirectSumSolver solver(1e-5);
    const RunResult r = run_integrator(b0, kNoField, solver, cfg);
    REQUIRE(r.trace.size() >= 5);
    for (std::size_t k = 1; k + 1 < r.trace.size(); ++k) {
        if (r.trace[k].limited || r.trace[k + 1].limited) continue;
        CHECK(r.trace[k + 1].h > r.trace[k].h);
        CHECK(r.trace[k + 1].max_accel < r.trace[k].max_accel);
    }
    // trace clocks strictly increase
    for (std::size_t k = 1; k < r.trace.size(); ++k)
        CHECK(r.trace[k].t0 > r.trace[k - 1].t0);
}

TEST_CASE("solver call counts per method") {
    BunchSpec spec;
    spec.n = 8;
    spec.total_charge = -1e-11;
    spec.seed = 8;
    const Bunch b0 = make_bunch(spec);
    IntegratorConfig cfg;
    cfg.h = 1e-12;
    cfg.t_end = 12e-12;  // 12 steps

    DirectSumSolver s_bb(1e-5);
    cfg.method = Method::BB;
    run_integrator(b0, kNoField, s_bb, cfg);
    CHECK(s_bb.calls() == 12);

    DirectSumSolver s_st(1e-5);
    cfg.method = Method::BBStale;
    cfg.stale_period = 5;
    run_integrator(b0, kNoField, s_st, cfg);
    CHECK(s_st.calls() == 3);  // ceil(12 / 5)

    DirectSumSolver s_mts(1e-5);
    cfg.method = Method::MTS;
    cfg.substeps = 4;
    run_integrator(b0, kNoField, s_mts, cfg);
    CHECK(s_mts.calls() == 13);  // initial solve + one per outer step

    DirectSumSolver s_ad(1e-5);
    cfg.method = Method::AMTS;
    cfg.dt_outer_init = 2e-12;
    cfg.dt_inner = 1e-12;
    const RunResult r = run_integrator(b0, kNoField, s_ad, cfg);
    CHECK(s_ad.calls() == static_cast<long>(r.trace.size()) + 1);
}

TEST_CASE("degenerate controller input fails loudly") {
    Bunch twin;
    twin.q = -phys::q_e;
    twin.m = phys::m_e;
    twin.Q = 0.0;
    twin.x.assign(2, Vec3{1e-3, 0, 0});  // zero beam size
    twin.p.assign(2, Vec3{0, 0, 0});
    IntegratorConfig cfg;
    cfg.method = Method::AMTS;
    cfg.g_kind = GKind::BeamSize;
    cfg.dt_outer_init = 1e-12;
    cfg.dt_inner = 1e-12;
    cfg.t_end = 1e-11;
    DirectSumSolver solver(1e-6);
    CHECK_THROWS_AS(run_integrator(twin, kNoField, solver, cfg), NumericalError);
}
