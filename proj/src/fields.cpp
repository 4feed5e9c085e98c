#include "beam/fields.hpp"

#include <cmath>

namespace beam {

namespace {

void accumulate(FieldSample& s, const UniformE& f, const Vec3&, double) { s.e += f.e0; }

void accumulate(FieldSample& s, const UniformB& f, const Vec3&, double) { s.b += f.b0; }

void accumulate(FieldSample& s, const Solenoid& f, const Vec3&, double) {
    s.b += f.bz * f.axis;
}

void accumulate(FieldSample& s, const RFGap& f, const Vec3& x, double t) {
    if (std::abs(x.z - f.z0) <= 0.5 * f.length)
        s.e.z += f.e0 * std::cos(f.omega * t + f.phi);
}

}  // namespace

FieldSample eval_external(const ExternalFieldModel& model, const Vec3& x, double t) {
    FieldSample s;
    for (const auto& part : model.parts)
        std::visit([&](const auto& f) { accumulate(s, f, x, t); }, part);
    return s;
}

}  // namespace beam
