#include <doctest.h>

#include <cmath>

#include "beam/constants.hpp"
#include "beam/fields.hpp"
#include "beam/self_field.hpp"

using namespace beam;

TEST_CASE("uniform magnetic model returns b0 and no electric field") {
    ExternalFieldModel model{{UniformB{Vec3{0.1, -0.2, 0.3}}}};
    const FieldSample s = eval_external(model, Vec3{1, 2, 3}, 4.5);
    CHECK(s.e.x == 0.0);
    CHECK(s.e.y == 0.0);
    CHECK(s.e.z == 0.0);
    CHECK(s.b.x == 0.1);
    CHECK(s.b.y == -0.2);
    CHECK(s.b.z == 0.3);
}

TEST_CASE("rf gap vanishes at the phase zero crossing and outside the gap") {
    const double omega = 2 * 3.14159265358979323846 * 1e9;
    ExternalFieldModel model{{RFGap{0.0, 5e6, omega, 0.0, 0.02}}};
    // cos(omega t) = 0 at t = quarter period
    const double t_zero = 0.25 * 2 * 3.14159265358979323846 / omega;
    const FieldSample on_axis = eval_external(model, Vec3{0, 0, 0}, t_zero);
    CHECK(on_axis.e.z == doctest::Approx(0.0).epsilon(1e-9));
    const FieldSample outside = eval_external(model, Vec3{0, 0, 0.011}, 0.0);
    CHECK(outside.e.z == 0.0);
    const FieldSample inside = eval_external(model, Vec3{0, 0, 0.009}, 0.0);
    CHECK(inside.e.z == doctest::Approx(5e6));
}

TEST_CASE("superposition adds fields componentwise") {
    const Vec3 e0{1e5, -2e5, 3e5};
    ExternalFieldModel model{{UniformE{e0}, UniformE{e0}}};
    const FieldSample s = eval_external(model, Vec3{0, 0, 0}, 0.0);
    CHECK(s.e.x == 2 * e0.x);
    CHECK(s.e.y == 2 * e0.y);
    CHECK(s.e.z == 2 * e0.z);
    ExternalFieldModel swapped{{UniformE{Vec3{1, 0, 0}}, UniformB{Vec3{0, 1, 0}}}};
    ExternalFieldModel original{{UniformB{Vec3{0, 1, 0}}, UniformE{Vec3{1, 0, 0}}}};
    const FieldSample a = eval_external(swapped, Vec3{0, 0, 0}, 0.0);
    const FieldSample b = eval_external(original, Vec3{0, 0, 0}, 0.0);
    CHECK(a.e.x == b.e.x);
    CHECK(a.b.y == b.b.y);
}

TEST_CASE("solenoid points along its axis") {
    ExternalFieldModel model{{Solenoid{Vec3{0, 0, 1}, 0.15}}};
    const FieldSample s = eval_external(model, Vec3{5, -2, 9}, 1.0);
    CHECK(s.b.z == 0.15);
    CHECK(s.b.x == 0.0);
}

TEST_CASE("acceleration reduces to f/m at rest") {
    const Vec3 f{1e-15, -2e-15, 0.5e-15};
    const Vec3 a = acceleration(Vec3{0, 0, 0}, f, phys::m_e);
    CHECK(a.x == doctest::Approx(f.x / phys::m_e).epsilon(1e-15));
    CHECK(a.y == doctest::Approx(f.y / phys::m_e).epsilon(1e-15));
    CHECK(a.z == doctest::Approx(f.z / phys::m_e).epsilon(1e-15));
}

TEST_CASE("acceleration transverse to the momentum picks up 1/gamma") {
    const double mc = phys::m_e * phys::c;
    const Vec3 p{0, 0, 3 * mc};  // gamma = sqrt(10)
    const Vec3 f{2e-15, 0, 0};
    const Vec3 a = acceleration(p, f, phys::m_e);
    const double g = std::sqrt(10.0);
    CHECK(a.x == doctest::Approx(f.x / (phys::m_e * g)).epsilon(1e-14));
    CHECK(std::abs(a.z) < 1e-30);
}

TEST_CASE("acceleration parallel to the momentum picks up 1/gamma^3") {
    const double mc = phys::m_e * phys::c;
    const Vec3 p{mc, 0, 0};  // gamma = sqrt(2)
    const Vec3 f{4e-15, 0, 0};
    const Vec3 a = acceleration(p, f, phys::m_e);
    const double g3 = std::pow(std::sqrt(2.0), 3);
    CHECK(norm(a) == doctest::Approx(norm(f) / (phys::m_e * g3)).epsilon(1e-13));
}

TEST_CASE("acceleration is linear in the force") {
    const double mc = phys::m_e * phys::c;
    const Vec3 p{0.3 * mc, -1.2 * mc, 0.7 * mc};
    const Vec3 f1{1e-15, 2e-15, -3e-15};
    const Vec3 f2{-4e-15, 0.5e-15, 1e-15};
    const Vec3 sum = acceleration(p, f1 + f2, phys::m_e);
    const Vec3 parts = acceleration(p, f1, phys::m_e) + acceleration(p, f2, phys::m_e);
    CHECK(norm(sum - parts) < 1e-12 * norm(sum));
}
