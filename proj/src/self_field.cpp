#include "beam/self_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beam/constants.hpp"
#include "beam/errors.hpp"

namespace beam {

namespace {

constexpr double kFourPiEps0 = 4.0 * 3.14159265358979323846 * phys::eps0;

struct BoostFrame {
    bool boosted = false;
    Vec3 axis{0, 0, 0};
    double gbar = 1.0;
    Vec3 vbar{0, 0, 0};
};

BoostFrame boost_frame(const Bunch& b) {
    Vec3 pbar{0, 0, 0};
    for (const auto& p : b.p) pbar += p;
    pbar *= 1.0 / static_cast<double>(b.size());
    const double pn = norm(pbar);
    BoostFrame fr;
    if (pn == 0.0) return fr;
    const double mc = b.m * phys::c;
    fr.boosted = true;
    fr.gbar = std::sqrt(1.0 + pn * pn / (mc * mc));
    fr.vbar = pbar * (1.0 / (b.m * fr.gbar));
    fr.axis = pbar * (1.0 / pn);
    return fr;
}

// Positions stretched along the mean-momentum axis by gamma_bar.
std::vector<Vec3> boosted_positions(const Bunch& b, const BoostFrame& fr) {
    std::vector<Vec3> xh(b.x);
    if (fr.boosted) {
        for (auto& x : xh) {
            const double par = dot(x, fr.axis);
            x += fr.axis * (par * (fr.gbar - 1.0));
        }
    }
    return xh;
}

// Inverse boost of the rest-frame field, magnetic field from the mean
// velocity, and the bunch-wide maximum space-charge acceleration.
SelfFieldResult finish_self(const Bunch& b, const std::vector<Vec3>& ehat,
                            const BoostFrame& fr) {
    const std::size_t n = b.size();
    SelfFieldResult out;
    out.e.resize(n);
    out.b.resize(n);
    const double mc = b.m * phys::c;
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 e = ehat[i];
        if (fr.boosted) {
            const Vec3 epar = fr.axis * dot(ehat[i], fr.axis);
            e = epar + (ehat[i] - epar) * fr.gbar;
        }
        const Vec3 bf = cross(fr.vbar, e) * (1.0 / (phys::c * phys::c));
        out.e[i] = e;
        out.b[i] = bf;
        const double g = std::sqrt(1.0 + dot(b.p[i], b.p[i]) / (mc * mc));
        const Vec3 v = b.p[i] * (1.0 / (b.m * g));
        const Vec3 f = (e + cross(v, bf)) * b.q;
        amax = std::max(amax, norm(acceleration(b.p[i], f, b.m)));
    }
    out.max_accel = amax;
    return out;
}

SelfFieldResult zero_result(std::size_t n) {
    SelfFieldResult out;
    out.e.assign(n, Vec3{0, 0, 0});
    out.b.assign(n, Vec3{0, 0, 0});
    out.max_accel = 0.0;
    return out;
}

}  // namespace

Vec3 acceleration(const Vec3& p, const Vec3& f, double m) {
    const double mc = m * phys::c;
    const double g2 = 1.0 + dot(p, p) / (mc * mc);
    const double g = std::sqrt(g2);
    const Vec3 fl = f - p * (dot(p, f) / (mc * mc * g2));
    return fl * (1.0 / (m * g));
}

SelfFieldResult DirectSumSolver::do_solve(const Bunch& b) {
    const std::size_t n = b.size();
    if (n <= 1 || b.Q == 0.0) return zero_result(n);
    const BoostFrame fr = boost_frame(b);
    const std::vector<Vec3> xh = boosted_positions(b, fr);

    // Scalar SoA sweep with symmetric (Newton's third law) accumulation.
    std::vector<double> xs(n), ys(n), zs(n), ax(n, 0.0), ay(n, 0.0), az(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = xh[i].x;
        ys[i] = xh[i].y;
        zs[i] = xh[i].z;
    }
    const double soft2 = soft_ * soft_;
    const double pref = b.Q / kFourPiEps0;
    for (std::size_t i = 1; i < n; ++i) {
        const double xi = xs[i], yi = ys[i], zi = zs[i];
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double dx = xi - xs[j];
            const double dy = yi - ys[j];
            const double dz = zi - zs[j];
            const double r2 = dx * dx + dy * dy + dz * dz + soft2;
            const double w = pref / (r2 * std::sqrt(r2));
            sx += w * dx;
            sy += w * dy;
            sz += w * dz;
            ax[j] -= w * dx;
            ay[j] -= w * dy;
            az[j] -= w * dz;
        }
        ax[i] += sx;
        ay[i] += sy;
        az[i] += sz;
    }
    std::vector<Vec3> ehat(n);
    for (std::size_t i = 0; i < n; ++i) ehat[i] = Vec3{ax[i], ay[i], az[i]};
    return finish_self(b, ehat, fr);
}

MeshSolver::MeshSolver(std::array<int, 3> dims, double padding)
    : n_(dims), pad_(padding) {
    for (int d : n_) {
        if (d < 8 || d % 2 != 0)
            throw std::invalid_argument("mesh grid dimensions must be even and >= 8");
    }
    if (!(pad_ >= 1.0)) throw std::invalid_argument("mesh padding must be >= 1");
}

MeshSolver::~MeshSolver() {
    if (fwd_) fftw_destroy_plan(reinterpret_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(reinterpret_cast<fftw_plan>(inv_));
    if (real_) fftw_free(real_);
    if (spec_) fftw_free(spec_);
    if (spec_rho_) fftw_free(spec_rho_);
}

void MeshSolver::ensure_plans() {
    if (fwd_) return;
    const int m0 = 2 * n_[0], m1 = 2 * n_[1], m2 = 2 * n_[2];
    const std::size_t nreal = static_cast<std::size_t>(m0) * m1 * m2;
    const std::size_t nspec = static_cast<std::size_t>(m0) * m1 * (m2 / 2 + 1);
    real_ = fftw_alloc_real(nreal);
    spec_ = fftw_alloc_complex(nspec);
    spec_rho_ = fftw_alloc_complex(nspec);
    fwd_ = reinterpret_cast<fftw_plan_s*>(fftw_plan_dft_r2c_3d(
        m0, m1, m2, real_, static_cast<fftw_complex*>(spec_), FFTW_ESTIMATE));
    inv_ = reinterpret_cast<fftw_plan_s*>(fftw_plan_dft_c2r_3d(
        m0, m1, m2, static_cast<fftw_complex*>(spec_), real_, FFTW_ESTIMATE));
}

SelfFieldResult MeshSolver::do_solve(const Bunch& b) {
    const std::size_t n = b.size();
    if (n <= 1 || b.Q == 0.0) return zero_result(n);
    const BoostFrame fr = boost_frame(b);
    const std::vector<Vec3> xh = boosted_positions(b, fr);

    Vec3 lo = xh[0], hi = xh[0];
    for (const auto& x : xh) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], x[a]);
            hi[a] = std::max(hi[a], x[a]);
        }
    }
    if (hi.x == lo.x && hi.y == lo.y && hi.z == lo.z)
        throw DegenerateInput("mesh deposit: all particles at one point");

    double h[3], x0[3];
    for (int a = 0; a < 3; ++a) {
        const double half = std::max(0.5 * (hi[a] - lo[a]) * pad_, 1e-12);
        h[a] = 2.0 * half / (n_[a] - 1);
        x0[a] = 0.5 * (lo[a] + hi[a]) - half;
    }

    // Cloud-in-cell deposit of the macroparticle charge onto grid nodes.
    const int n0 = n_[0], n1 = n_[1], n2 = n_[2];
    std::vector<double> rho(static_cast<std::size_t>(n0) * n1 * n2, 0.0);
    std::vector<std::array<int, 3>> cell(n);
    std::vector<Vec3> frac(n);
    auto nidx = [n1, n2](int i, int j, int k) {
        return (static_cast<std::size_t>(i) * n1 + j) * n2 + k;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < 3; ++a) {
            const double g = (xh[i][a] - x0[a]) / h[a];
            int c = static_cast<int>(std::floor(g));
            c = std::clamp(c, 0, n_[a] - 2);
            cell[i][a] = c;
            frac[i][a] = g - c;
        }
        const auto& c = cell[i];
        const auto& f = frac[i];
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dz = 0; dz <= 1; ++dz) {
                    const double w = std::abs(1.0 - dx - f.x) * std::abs(1.0 - dy - f.y) *
                                     std::abs(1.0 - dz - f.z) * b.Q;
                    rho[nidx(c[0] + dx, c[1] + dy, c[2] + dz)] += w;
                }
    }

    ensure_plans();
    const int m0 = 2 * n0, m1 = 2 * n1, m2 = 2 * n2;
    const std::size_t nreal = static_cast<std::size_t>(m0) * m1 * m2;
    const std::size_t nspec = static_cast<std::size_t>(m0) * m1 * (m2 / 2 + 1);
    auto midx = [m1, m2](int i, int j, int k) {
        return (static_cast<std::size_t>(i) * m1 + j) * m2 + k;
    };

    // Charge spectrum.
    std::fill(real_, real_ + nreal, 0.0);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n2; ++k) real_[midx(i, j, k)] = rho[nidx(i, j, k)];
    fftw_execute(reinterpret_cast<fftw_plan>(fwd_));
    {
        auto* src = static_cast<fftw_complex*>(spec_);
        auto* dst = static_cast<fftw_complex*>(spec_rho_);
        for (std::size_t s = 0; s < nspec; ++s) {
            dst[s][0] = src[s][0];
            dst[s][1] = src[s][1];
        }
    }

    // Open-boundary Green function (point charge -> potential) on the doubled
    // grid with mirrored distances; the singular node takes the cell average
    // of 1/(4 pi eps0 r) by Gauss-Legendre quadrature.
    for (int i = 0; i < m0; ++i) {
        const double di = std::min(i, m0 - i) * h[0];
        for (int j = 0; j < m1; ++j) {
            const double dj = std::min(j, m1 - j) * h[1];
            for (int k = 0; k < m2; ++k) {
                const double dk = std::min(k, m2 - k) * h[2];
                const double r = std::sqrt(di * di + dj * dj + dk * dk);
                real_[midx(i, j, k)] = r > 0.0 ? 1.0 / (kFourPiEps0 * r) : 0.0;
            }
        }
    }
    {
        static constexpr double gx[8] = {
            -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
            0.7966664774136267,  0.9602898564975363};
        static constexpr double gw[8] = {
            0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
            0.2223810344533745, 0.1012285362903763};
        double avg = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double px = 0.5 * h[0] * gx[i];
            for (int j = 0; j < 8; ++j) {
                const double py = 0.5 * h[1] * gx[j];
                for (int k = 0; k < 8; ++k) {
                    const double pz = 0.5 * h[2] * gx[k];
                    const double r = std::sqrt(px * px + py * py + pz * pz);
                    avg += 0.125 * h[0] * h[1] * h[2] * gw[i] * gw[j] * gw[k] / r;
                }
            }
        }
        avg /= h[0] * h[1] * h[2];
        real_[midx(0, 0, 0)] = avg / kFourPiEps0;
    }
    fftw_execute(reinterpret_cast<fftw_plan>(fwd_));

    // Convolve and invert (FFTW transforms are unnormalized).
    {
        auto* g = static_cast<fftw_complex*>(spec_);
        auto* r = static_cast<fftw_complex*>(spec_rho_);
        const double scale = 1.0 / static_cast<double>(nreal);
        for (std::size_t s = 0; s < nspec; ++s) {
            const double re = (g[s][0] * r[s][0] - g[s][1] * r[s][1]) * scale;
            const double im = (g[s][0] * r[s][1] + g[s][1] * r[s][0]) * scale;
            g[s][0] = re;
            g[s][1] = im;
        }
    }
    fftw_execute(reinterpret_cast<fftw_plan>(inv_));
    auto phi = [&](int i, int j, int k) { return real_[midx(i, j, k)]; };

    // E = -grad phi, central differences with one-sided stencils at the faces.
    std::vector<Vec3> efield(static_cast<std::size_t>(n0) * n1 * n2);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n2; ++k) {
                Vec3 e;
                e.x = i == 0          ? -(phi(1, j, k) - phi(0, j, k)) / h[0]
                      : i == n0 - 1   ? -(phi(n0 - 1, j, k) - phi(n0 - 2, j, k)) / h[0]
                                      : -(phi(i + 1, j, k) - phi(i - 1, j, k)) / (2.0 * h[0]);
                e.y = j == 0          ? -(phi(i, 1, k) - phi(i, 0, k)) / h[1]
                      : j == n1 - 1   ? -(phi(i, n1 - 1, k) - phi(i, n1 - 2, k)) / h[1]
                                      : -(phi(i, j + 1, k) - phi(i, j - 1, k)) / (2.0 * h[1]);
                e.z = k == 0          ? -(phi(i, j, 1) - phi(i, j, 0)) / h[2]
                      : k == n2 - 1   ? -(phi(i, j, n2 - 1) - phi(i, j, n2 - 2)) / h[2]
                                      : -(phi(i, j, k + 1) - phi(i, j, k - 1)) / (2.0 * h[2]);
                efield[nidx(i, j, k)] = e;
            }

    // Cloud-in-cell gather with the deposit weights.
    std::vector<Vec3> ehat(n, Vec3{0, 0, 0});
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = cell[i];
        const auto& f = frac[i];
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dz = 0; dz <= 1; ++dz) {
                    const double w = std::abs(1.0 - dx - f.x) * std::abs(1.0 - dy - f.y) *
                                     std::abs(1.0 - dz - f.z);
                    ehat[i] += efield[nidx(c[0] + dx, c[1] + dy, c[2] + dz)] * w;
                }
    }
    return finish_self(b, ehat, fr);
}

std::unique_ptr<SelfFieldSolver> make_solver(const SelfFieldConfig& cfg) {
    if (cfg.kind == SelfFieldConfig::Kind::MeshPIC)
        return std::make_unique<MeshSolver>(cfg.grid, cfg.padding);
    return std::make_unique<DirectSumSolver>(cfg.softening);
}

}  // namespace beam
