#include <doctest.h>

#include <cmath>
#include <random>

#include "she/kernel.hpp"

using namespace she;

namespace {

// Independent oracle: raw image sum with |n| <= 10, no tail logic.
double image_sum_oracle(double t, double z) {
    double s = 0.0;
    for (int n = -10; n <= 10; ++n) s += std::exp(-(z + 2.0 * n) * (z + 2.0 * n) / (4.0 * t));
    return s / std::sqrt(4.0 * M_PI * t);
}

}  // namespace

TEST_CASE("KernelConfig validation") {
    KernelConfig bad;
    bad.tail_tolerance = 1e-3;  // must be <= 1e-6
    CHECK_THROWS(bad.validate());
    bad = KernelConfig{};
    bad.crossover_time = 2.0;  // must be <= 1
    CHECK_THROWS(bad.validate());
    CHECK_NOTHROW(KernelConfig{}.validate());
}

TEST_CASE("heat_kernel domain and symmetry") {
    CHECK_THROWS(heat_kernel(0.0, 0.0, 0.0));
    CHECK_THROWS(heat_kernel(-1.0, 0.0, 0.0));
    CHECK(heat_kernel(0.3, 0.2, -0.5) ==
          doctest::Approx(heat_kernel(0.3, -0.5, 0.2)).epsilon(1e-14));
}

TEST_CASE("heat_kernel long-time limit 1/2") {
    CHECK(std::fabs(heat_kernel(10.0, 0.0, 0.0) - 0.5) <= 1e-12);
    CHECK(std::fabs(heat_kernel(10.0, 0.7, -0.3) - 0.5) <= 1e-12);
}

TEST_CASE("heat_kernel short-time value vs direct image-sum oracle") {
    // Leading term (4 pi 0.01)^{-1/2} = 2.8209479...
    CHECK(heat_kernel(0.01, 0.0, 0.0) == doctest::Approx(2.820948).epsilon(1e-5));
    for (double z : {0.0, 0.1, 0.5, 0.99})
        for (double t : {0.005, 0.02, 0.1})
            CHECK(heat_kernel(t, z, 0.0) == doctest::Approx(image_sum_oracle(t, z)).epsilon(1e-11));
}

TEST_CASE("image and spectral representations agree around the crossover") {
    for (double t : {0.1, 0.2, 0.25, 0.3, 0.5})
        for (double z : {0.0, 0.3, 0.77, 1.0})
            CHECK(std::fabs(heat_kernel_image(t, z, 1e-13) - heat_kernel_spectral(t, z, 1e-13)) <=
                  1e-10);
}

TEST_CASE("normalization over the grid") {
    TorusGrid g(256);
    for (double t : {1e-3, 0.05, 0.25, 1.0, 10.0}) {
        double s = 0.0;
        for (int j = 0; j < g.n_points; ++j) s += heat_kernel(t, g.point(j), 0.0);
        CHECK(std::fabs(g.spacing * s - 1.0) <= 1e-9);
    }
}

TEST_CASE("pointwise bound 2(1 v t^{-1/2}) and positivity") {
    TorusGrid g(128);
    for (double t : {1e-3, 0.01, 0.25, 1.0, 2.0}) {
        double cap = 2.0 * std::max(1.0, 1.0 / std::sqrt(t));
        for (int j = 0; j < g.n_points; ++j) {
            double p = heat_kernel(t, g.point(j), 0.0);
            CHECK(p > 0.0);
            CHECK(p <= cap);
        }
    }
}

TEST_CASE("semigroup_apply: constants, eigenmode, spike limit") {
    TorusGrid g(256);
    GridFunction one(g, 1.0);
    GridFunction p1 = semigroup_apply(0.3, one);
    for (int j = 0; j < g.n_points; ++j) CHECK(p1[j] == doctest::Approx(1.0).epsilon(1e-9));

    // cos(pi x) decays by e^{-pi^2 t}.
    GridFunction c = GridFunction::sample(g, [](double x) { return std::cos(M_PI * x); });
    GridFunction pc = semigroup_apply(0.1, c);
    const double decay = std::exp(-M_PI * M_PI * 0.1);
    for (int j = 0; j < g.n_points; ++j)
        CHECK(pc[j] == doctest::Approx(decay * std::cos(M_PI * g.point(j))).epsilon(1e-4));

    GridFunction spike(g, 0.0);
    spike[10] = 1.0 / g.spacing;  // unit mass
    GridFunction ps = semigroup_apply(50.0, spike);
    for (int j = 0; j < g.n_points; ++j) CHECK(std::fabs(ps[j] - 0.5) <= 1e-6);
}

TEST_CASE("semigroup composition and mass conservation") {
    TorusGrid g(256);
    // Strictly positive: mass conservation is stated for non-negative f.
    GridFunction f = GridFunction::sample(
        g, [](double x) { return 1.5 + std::cos(M_PI * x) + 0.25 * std::sin(2 * M_PI * x); });
    GridFunction a = semigroup_apply(0.1, semigroup_apply(0.2, f));
    GridFunction b = semigroup_apply(0.3, f);
    for (int j = 0; j < g.n_points; ++j) CHECK(std::fabs(a[j] - b[j]) <= 1e-7);
    CHECK(norm_l1(semigroup_apply(0.7, f)) == doctest::Approx(norm_l1(f)).epsilon(1e-9));
}

TEST_CASE("normal_cdf and ball-mass constant") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    // Oracle: Phi(3/sqrt2) - Phi(1/sqrt2) = (erf(1.5) - erf(0.5))/2.
    const double oracle = 0.5 * (std::erf(1.5) - std::erf(0.5));
    CHECK(ball_mass_constant() == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(ball_mass_constant() == doctest::Approx(0.222802).epsilon(1e-5));
}

TEST_CASE("check_lipschitz_bound") {
    TorusGrid g(256);
    LipschitzReport flat = check_lipschitz_bound(0.5, GridFunction(g, 1.0));
    CHECK(flat.measured_lip <= 1e-10);
    CHECK(flat.pass);

    GridFunction spike(g, 0.0);
    spike[0] = 1.0 / g.spacing;
    LipschitzReport sp = check_lipschitz_bound(0.04, spike);
    CHECK(sp.bound == doctest::Approx(210.0).epsilon(1e-9));  // (7/0.2)(1+1/0.2)*1
    CHECK(sp.pass);

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        GridFunction f(g);
        for (int j = 0; j < g.n_points; ++j) f[j] = u(rng);
        for (double t : {0.01, 0.1, 1.0}) CHECK(check_lipschitz_bound(t, f).pass);
    }
}

TEST_CASE("check_ball_mass") {
    TorusGrid g(256);
    CHECK_THROWS(check_ball_mass(0.01, 0.0, 0.5, g));  // c < 1
    BallMassReport r = check_ball_mass(0.01, 0.0, 1.0, g);
    CHECK(r.bound_constant == doctest::Approx(0.5 * (std::erf(1.5) - std::erf(0.5))).epsilon(1e-12));
    CHECK(r.min_over_ball >= r.bound_constant);
    CHECK(r.pass);
    // Both chi readings recorded, neither asserted against the other.
    CHECK(r.chi_log_reading == doctest::Approx(std::log(8.0) - std::log(r.bound_constant)).epsilon(1e-12));
    CHECK(r.chi_lin_reading == doctest::Approx(std::log(8.0) - r.bound_constant).epsilon(1e-12));

    for (double t : {0.01, 0.04})
        for (double a : {-0.8, 0.0, 0.33}) CHECK(check_ball_mass(t, a, 1.5, g).pass);
}
