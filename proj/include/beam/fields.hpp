#pragma once

#include <variant>
#include <vector>

#include "beam/vec3.hpp"

namespace beam {

struct FieldSample {
    Vec3 e;  // [V/m]
    Vec3 b;  // [T]
};

struct UniformE {
    Vec3 e0;
};

struct UniformB {
    Vec3 b0;
};

// Uniform field of strength bz along a (unit) axis.
struct Solenoid {
    Vec3 axis{0.0, 0.0, 1.0};
    double bz = 0.0;
};

// Longitudinal gradient E0 cos(omega t + phi) z^ inside |z - z0| <= length/2.
struct RFGap {
    double z0 = 0.0;
    double e0 = 0.0;     // peak gradient [V/m]
    double omega = 0.0;  // [rad/s]
    double phi = 0.0;
    double length = 0.0;
};

using FieldModel = std::variant<UniformE, UniformB, Solenoid, RFGap>;

// Additive superposition of elementary models; empty list = field free.
struct ExternalFieldModel {
    std::vector<FieldModel> parts;
};

FieldSample eval_external(const ExternalFieldModel& model, const Vec3& x, double t);

}  // namespace beam
