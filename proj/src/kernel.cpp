#include "she/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace she {

void KernelConfig::validate() const {
    if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-6))
        throw config_error("KernelConfig: tail_tolerance must be in (0, 1e-6]");
    if (!(crossover_time > 0.0 && crossover_time <= 1.0))
        throw config_error("KernelConfig: crossover_time must be in (0, 1]");
}

namespace {

// Wrap a difference into [-1,1].
double wrap(double z) {
    z = std::fmod(z, 2.0);
    if (z > 1.0) z -= 2.0;
    if (z < -1.0) z += 2.0;
    return z;
}

}  // namespace

double heat_kernel_image(double t, double z, double tail_tolerance) {
    z = wrap(z);
    const double inv4t = 1.0 / (4.0 * t);
    const double c = 1.0 / std::sqrt(4.0 * M_PI * t);
    double s = std::exp(-z * z * inv4t);
    // Add image pairs n = 1,2,... until a geometric bound on the rest is small.
    for (int n = 1;; ++n) {
        double a = z + 2.0 * n;
        double b = z - 2.0 * n;
        s += std::exp(-a * a * inv4t) + std::exp(-b * b * inv4t);
        // For |m| >= n+1 and |z| <= 1: (z +- 2m)^2 >= (2m-1)^2, and successive
        // terms shrink by at least rho = exp(-2(n+1)/t).
        double head = std::exp(-(2.0 * n + 1.0) * (2.0 * n + 1.0) * inv4t);
        double rho = std::exp(-2.0 * (n + 1) / t);
        double tail = 2.0 * head / (1.0 - rho);
        if (c * tail <= tail_tolerance) break;
        if (n > 10000) throw std::runtime_error("heat_kernel_image: no convergence");
    }
    return c * s;
}

double heat_kernel_spectral(double t, double z, double tail_tolerance) {
    z = wrap(z);
    double s = 0.5;
    const double pi2t = M_PI * M_PI * t;
    for (int m = 1;; ++m) {
        s += std::exp(-pi2t * m * m) * std::cos(M_PI * m * z);
        double head = std::exp(-pi2t * (m + 1.0) * (m + 1.0));
        double rho = std::exp(-pi2t * (2.0 * m + 3.0));
        if (head / (1.0 - rho) <= tail_tolerance) break;
        if (m > 100000) throw std::runtime_error("heat_kernel_spectral: no convergence");
    }
    return s;
}

double heat_kernel(double t, double x, double y, const KernelConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
    double z = wrap(x - y);
    return (t <= cfg.crossover_time) ? heat_kernel_image(t, z, cfg.tail_tolerance)
                                     : heat_kernel_spectral(t, z, cfg.tail_tolerance);
}

GridFunction semigroup_apply(double t, const GridFunction& f, const KernelConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("semigroup_apply: t must be positive");
    const TorusGrid& g = f.grid;
    const int n = g.n_points;
    // p_t(x_i - x_j) depends only on (i - j) mod n.
    std::vector<double> row(static_cast<size_t>(n));
    for (int d = 0; d < n; ++d) row[d] = heat_kernel(t, d * g.spacing, 0.0, cfg);
    GridFunction out(g);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            int d = i - j;
            if (d < 0) d += n;
            s += row[d] * f[j];
        }
        out[i] = g.spacing * s;
    }
    return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ball_mass_constant() {
    return normal_cdf(3.0 / std::sqrt(2.0)) - normal_cdf(1.0 / std::sqrt(2.0));
}

LipschitzReport check_lipschitz_bound(double t, const GridFunction& f, const KernelConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("check_lipschitz_bound: t must be positive");
    GridFunction g = semigroup_apply(t, f, cfg);
    const int n = g.size();
    double lip = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = std::fabs(g[(j + 1) % n] - g[j]) / g.grid.spacing;
        lip = std::max(lip, d);
    }
    double rt = std::sqrt(t);
    LipschitzReport r;
    r.measured_lip = lip;
    r.bound = (7.0 / rt) * (1.0 + 1.0 / rt) * norm_l1(f);
    r.pass = lip <= r.bound;
    return r;
}

BallMassReport check_ball_mass(double t, double a, double c, const TorusGrid& grid,
                               const KernelConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("check_ball_mass: t must be positive");
    if (c < 1.0) throw std::domain_error("check_ball_mass: c must be >= 1");
    if (c * std::sqrt(t) > 1.0)
        throw std::domain_error("check_ball_mass: ball exceeds torus radius");
    const double rt = std::sqrt(t);
    const double r_inner = c * rt;
    const double r_outer = (c + 1.0) * rt;

    std::vector<double> ys;
    for (int j = 0; j < grid.n_points; ++j)
        if (TorusGrid::distance(grid.point(j), a) <= r_inner) ys.push_back(grid.point(j));

    BallMassReport r;
    r.bound_constant = ball_mass_constant();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.n_points; ++i) {
        double x = grid.point(i);
        if (TorusGrid::distance(x, a) > r_outer) continue;
        double s = 0.0;
        for (double y : ys) s += heat_kernel(t, x, y, cfg);
        lo = std::min(lo, grid.spacing * s);
    }
    r.min_over_ball = lo;
    r.pass = lo >= r.bound_constant;
    r.chi_log_reading = std::log(8.0) - std::log(r.bound_constant);
    r.chi_lin_reading = std::log(8.0) - r.bound_constant;
    return r;
}

}  // namespace she
