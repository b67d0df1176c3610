#pragma once

#include "she/fields.hpp"

namespace she {

struct KernelConfig {
    double tail_tolerance = 1e-12;  // bound on the omitted series tail
    double crossover_time = 0.25;   // image sum below, spectral sum above

    void validate() const;
};

// Periodic heat kernel p_t(x,y) = p_t(x-y) on the torus of circumference 2,
// generator d^2/dx^2. Series truncated so the omitted tail is <= tail_tolerance.
double heat_kernel(double t, double x, double y, const KernelConfig& cfg = {});

// The two series representations, exposed for cross-checks.
double heat_kernel_image(double t, double z, double tail_tolerance);
double heat_kernel_spectral(double t, double z, double tail_tolerance);

// Discrete semigroup (P_t f)(x_i) = dx * sum_j p_t(x_i,x_j) f_j.
GridFunction semigroup_apply(double t, const GridFunction& f, const KernelConfig& cfg = {});

// Standard normal CDF.
double normal_cdf(double z);

// A = Phi(3/sqrt 2) - Phi(1/sqrt 2), the ball-mass lower-bound constant.
double ball_mass_constant();

struct LipschitzReport {
    double measured_lip = 0;
    double bound = 0;
    bool pass = false;
};

// Checks lip(P_t f) <= (7/sqrt t)(1 + 1/sqrt t) ||f||_L1 on the grid.
LipschitzReport check_lipschitz_bound(double t, const GridFunction& f,
                                      const KernelConfig& cfg = {});

struct BallMassReport {
    double min_over_ball = 0;
    double bound_constant = 0;  // A
    bool pass = false;
    // The source material's chi computation conflates log A with A; both
    // readings are reported and neither is asserted.
    double chi_log_reading = 0;  // log 8 - log A
    double chi_lin_reading = 0;  // log 8 - A
};

// Checks min over grid x in B(a,(c+1)sqrt t) of the p_t-mass of B(a,c sqrt t)
// against the constant A.
BallMassReport check_ball_mass(double t, double a, double c, const TorusGrid& grid,
                               const KernelConfig& cfg = {});

}  // namespace she
