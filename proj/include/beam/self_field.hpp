#pragma once

#include <array>
#include <memory>
#include <vector>

#include "beam/bunch.hpp"
#include "beam/vec3.hpp"

// Forward declarations of the FFTW plan/buffer types used by MeshSolver.
struct fftw_plan_s;

namespace beam {

// Per-particle self fields in the lab frame plus the bunch-wide maximum of
// the space-charge acceleration, which drives the adaptive step controller.
struct SelfFieldResult {
    std::vector<Vec3> e;  // [V/m]
    std::vector<Vec3> b;  // [T]
    double max_accel = 0.0;  // [m/s^2]
};

// a = (f - p (p.f) / (m^2 c^2 gamma^2)) / (m gamma)
Vec3 acceleration(const Vec3& p, const Vec3& f, double m);

struct SelfFieldConfig {
    enum class Kind { DirectSum, MeshPIC };
    Kind kind = Kind::DirectSum;
    double softening = 1e-6;              // DirectSum pair softening [m]
    std::array<int, 3> grid = {32, 32, 32};  // MeshPIC node counts, >= 8 and even
    double padding = 1.1;                 // MeshPIC bounding-box inflation
};

// Both solvers share the quasi-static procedure: boost positions into the
// mean-momentum rest frame (stretch the longitudinal coordinate by gamma_bar),
// solve the electrostatic problem there, boost the field back
// (e_par unchanged, e_perp scaled by gamma_bar, b = v_bar x e / c^2).
class SelfFieldSolver {
public:
    virtual ~SelfFieldSolver() = default;

    SelfFieldResult solve(const Bunch& b) {
        ++calls_;
        return do_solve(b);
    }
    long calls() const { return calls_; }

private:
    virtual SelfFieldResult do_solve(const Bunch& b) = 0;
    long calls_ = 0;
};

// Softened pairwise Coulomb sum, O(N^2).
class DirectSumSolver : public SelfFieldSolver {
public:
    explicit DirectSumSolver(double softening = 1e-6) : soft_(softening) {}

private:
    SelfFieldResult do_solve(const Bunch& b) override;
    double soft_;
};

// Cloud-in-cell deposit, open-boundary Poisson solve by Green's-function
// convolution on a zero-padded (doubled) grid, central-difference gradient,
// cloud-in-cell gather.
class MeshSolver : public SelfFieldSolver {
public:
    explicit MeshSolver(std::array<int, 3> dims = {32, 32, 32}, double padding = 1.1);
    ~MeshSolver() override;

    MeshSolver(const MeshSolver&) = delete;
    MeshSolver& operator=(const MeshSolver&) = delete;

private:
    SelfFieldResult do_solve(const Bunch& b) override;
    void ensure_plans();

    std::array<int, 3> n_;
    double pad_;
    double* real_ = nullptr;    // doubled-grid real workspace
    void* spec_ = nullptr;      // spectrum workspace (fftw_complex)
    void* spec_rho_ = nullptr;  // stashed charge spectrum
    fftw_plan_s* fwd_ = nullptr;
    fftw_plan_s* inv_ = nullptr;
};

std::unique_ptr<SelfFieldSolver> make_solver(const SelfFieldConfig& cfg);

}  // namespace beam
