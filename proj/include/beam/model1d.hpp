#pragma once

#include <vector>

namespace beam::model1d {

// One-dimensional radial escape from a repulsive inverse-square force,
// x'' = +1/x^2 with energy E = v^2/2 + 1/x = 1/x_L set by the turning
// point: closed-form turning point, speed, and time-of-flight, plus a
// bisection inversion giving x(t).

// Turning (lowest) point reached from state (x0, v0).
double x_lowest(double x0, double v0);

// Outward speed at x on the orbit with turning point xL (x >= xL > 0).
double velocity_at(double x, double xL);

// Time to coast from xL out to x (x >= xL > 0).
double time_from_lowest(double x, double xL);

// Inverse of time_from_lowest: position after coasting time t >= 0 from xL.
double invert_time(double t, double xL);

struct State1D {
    double x = 0.0;
    double v = 0.0;
};

// Exact state at time t for the trajectory through (x0, v0) at t = 0.
State1D exact_solution(double x0, double v0, double t);

struct VerletResult {
    double x = 0.0;
    double v = 0.0;
    double t = 0.0;
    long steps = 0;
    bool broke = false;
};

// Adaptive velocity Verlet in rescaled time: dt = lambda dtau with
// g(x) = x^beta and the time-reversible reciprocal update
// lambda_new = 1 / (2/g(x) - 1/lambda). Stops at the first step with
// t >= t_end (no truncation of the final step).
VerletResult adaptive_verlet(double x0, double v0, double t_end, double beta,
                             double dt0, long max_steps = 10000000);

// Same scheme, running exactly nsteps steps with no stop rule.
VerletResult run_fixed_steps(double x0, double v0, long nsteps, double beta, double dt0);

struct Calibration {
    double dt0 = 0.0;
    bool broke = false;
};

// Bisect dt0 so the clock after exactly `target` steps lands on t_end
// (the map dt0 -> t is monotone; a broken trial counts as overshoot).
Calibration calibrate_dt0(double x0, double v0, double t_end, double beta,
                          long target = 1000);

struct SweepRow {
    double H = 0.0;     // initial-to-final distance contrast x0/x_L scale
    double beta = 0.0;
    long steps = 0;     // adaptive run's step count (calibrated near 1000)
    double dt0 = 0.0;
    double err_x = 0.0;
    double err_v = 0.0;
    double err = 0.0;   // max of the two relative errors; +inf on breakdown
    bool broke = false;
};

// Step-equalized accuracy comparison across beta in {0, 0.25, ..., 2} for
// trajectories falling from x0 = x(10) down to x_L = 1/H and out again to
// t_end = 20, H in {1, 10, 100}.
std::vector<SweepRow> beta_sweep();

}  // namespace beam::model1d
