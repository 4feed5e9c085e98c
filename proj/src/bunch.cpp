#include "beam/bunch.hpp"

#include <algorithm>
#include <cmath>

#include "beam/constants.hpp"
#include "beam/errors.hpp"

namespace beam {

double lorentz_gamma(const Vec3& p, double m) {
    const double mc = m * phys::c;
    return std::sqrt(1.0 + norm2(p) / (mc * mc));
}

double rms_size(const Bunch& b, int axis) {
    const std::size_t n = b.size();
    double mean = 0.0;
    for (const auto& x : b.x) mean += x[axis];
    mean /= static_cast<double>(n);
    double s = 0.0;
    for (const auto& x : b.x) {
        const double u = x[axis] - mean;
        s += u * u;
    }
    return std::sqrt(s / static_cast<double>(n));
}

double rms_emittance(const Bunch& b, int axis) {
    const std::size_t n = b.size();
    if (n < 2) throw DegenerateInput("rms_emittance needs at least two particles");
    double mu = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += b.x[i][axis];
        mp += b.p[i][axis];
    }
    mu /= static_cast<double>(n);
    mp /= static_cast<double>(n);
    double suu = 0.0, spp = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = b.x[i][axis] - mu;
        const double pu = b.p[i][axis] - mp;
        suu += u * u;
        spp += pu * pu;
        sup += u * pu;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double det = (suu * inv_n) * (spp * inv_n) - (sup * inv_n) * (sup * inv_n);
    return std::sqrt(std::max(det, 0.0)) / (b.m * phys::c);
}

double mean_kinetic_energy_ev(const Bunch& b) {
    const double mc2_ev = b.m * phys::c * phys::c / phys::q_e;
    double sum = 0.0;
    for (const auto& p : b.p) sum += (lorentz_gamma(p, b.m) - 1.0) * mc2_ev;
    return sum / static_cast<double>(b.size());
}

DiagnosticsRow make_diagnostics_row(const Bunch& b, double h, int m, long solves,
                                    double max_accel) {
    DiagnosticsRow row;
    row.t = b.t;
    row.h = h;
    row.m = m;
    row.solves = solves;
    for (int a = 0; a < 3; ++a) {
        row.rms[a] = rms_size(b, a);
        row.emit[a] = b.size() >= 2 ? rms_emittance(b, a) : 0.0;
    }
    row.mean_ke = mean_kinetic_energy_ev(b);
    row.max_accel = max_accel;
    return row;
}

}  // namespace beam
