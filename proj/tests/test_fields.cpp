#include <doctest.h>

#include <cmath>

#include "she/fields.hpp"

using namespace she;

TEST_CASE("TorusGrid basic geometry") {
    TorusGrid g(256);
    CHECK(g.spacing == 2.0 / 256);
    CHECK(g.spacing * g.n_points == 2.0);  // exact in binary: 2/256 is a power of two
    CHECK(g.point(0) == -1.0);
    CHECK(g.point(g.n_points / 2) == 0.0);  // x = 0 representable for even n
    CHECK(g.cell_of(0.0) == g.n_points / 2);
    CHECK(g.cell_of(-1.0) == 0);
    CHECK(g.cell_of(1.0) == 0);  // wraps: 1 is identified with -1
    CHECK(g.cell_of(-1.0 + 0.5 * g.spacing) == 0);
}

TEST_CASE("TorusGrid rejects odd or tiny n") {
    CHECK_THROWS_AS(TorusGrid(3), config_error);
    CHECK_THROWS_AS(TorusGrid(2), config_error);
    CHECK_THROWS_AS(TorusGrid(7), config_error);
    CHECK_NOTHROW(TorusGrid(4));
}

TEST_CASE("torus distance wraps") {
    CHECK(TorusGrid::distance(0.9, -0.9) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(TorusGrid::distance(-1.0, 1.0) == doctest::Approx(0.0));
    CHECK(TorusGrid::distance(0.25, -0.25) == doctest::Approx(0.5));
    CHECK(TorusGrid::distance(0.0, 1.0) == doctest::Approx(1.0));  // max distance
}

TEST_CASE("GridFunction size check") {
    TorusGrid g(8);
    CHECK_THROWS_AS(GridFunction(g, std::vector<double>(7, 1.0)), invalid_field);
}

TEST_CASE("norm_l1 examples") {
    TorusGrid g(256);
    CHECK(norm_l1(GridFunction(g, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(norm_l1(GridFunction(g, 0.0)) == 0.0);
    // Oracle: int_T |cos(pi x)| dx = 4/pi.
    GridFunction c = GridFunction::sample(g, [](double x) { return std::cos(M_PI * x); });
    CHECK(norm_l1(c) == doctest::Approx(4.0 / M_PI).epsilon(1e-3));
}

TEST_CASE("norm_sup examples") {
    TorusGrid g(256);
    CHECK(norm_sup(GridFunction(g, -3.5)) == 3.5);
    GridFunction spike(g, 0.0);
    spike[17] = 7.0;
    CHECK(norm_sup(spike) == 7.0);
    GridFunction c = GridFunction::sample(g, [](double x) { return std::cos(M_PI * x); });
    CHECK(norm_sup(c) == 1.0);  // attained exactly at j = n/2 (x = 0)
}

TEST_CASE("osc_log examples and positivity") {
    TorusGrid g(256);
    CHECK(osc_log(GridFunction(g, 3.0)) == 0.0);
    GridFunction e = GridFunction::sample(g, [](double x) { return std::exp(std::cos(M_PI * x)); });
    CHECK(osc_log(e) == doctest::Approx(2.0).epsilon(1e-12));
    GridFunction two(g, 1.0);
    two[5] = 10.0;
    CHECK(osc_log(two) == doctest::Approx(std::log(10.0)).epsilon(1e-14));

    GridFunction bad(g, 1.0);
    bad[42] = 0.0;
    try {
        osc_log(bad);
        CHECK(false);
    } catch (const positivity_error& err) {
        CHECK(err.index == 42);
    }
}

TEST_CASE("ratio_sup_l1 examples") {
    TorusGrid g(256);
    CHECK(ratio_sup_l1(GridFunction(g, 5.0)) == doctest::Approx(0.5).epsilon(1e-14));
    GridFunction spike(g, 0.0);
    spike[0] = 1.0 / g.spacing;  // unit mass on one cell
    CHECK(norm_l1(spike) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ratio_sup_l1(spike) == doctest::Approx(1.0 / g.spacing).epsilon(1e-12));
    // sup = 2, integral = 2.
    GridFunction c = GridFunction::sample(g, [](double x) { return 1.0 + std::cos(M_PI * x); });
    CHECK(ratio_sup_l1(c) == doctest::Approx(1.0).epsilon(1e-3));

    CHECK_THROWS_AS(ratio_sup_l1(GridFunction(g, 0.0)), degenerate_field);
}

TEST_CASE("non-finite input rejected") {
    TorusGrid g(8);
    GridFunction f(g, 1.0);
    f[3] = std::nan("");
    CHECK_THROWS_AS(norm_l1(f), invalid_field);
    CHECK_THROWS_AS(norm_sup(f), invalid_field);
    CHECK_THROWS_AS(osc_log(f), invalid_field);
}

TEST_CASE("properties: ratio lower bound, homogeneity, osc shift invariance") {
    TorusGrid g(128);
    // A few deterministic positive fields.
    auto fields = {
        GridFunction::sample(g, [](double x) { return 1.5 + std::sin(M_PI * x); }),
        GridFunction::sample(g, [](double x) { return std::exp(2.0 * std::cos(3 * M_PI * x)); }),
        GridFunction::sample(g, [](double x) { return 0.01 + x * x; }),
    };
    for (const auto& f : fields) {
        CHECK(ratio_sup_l1(f) >= 0.5);
        for (double c : {0.5, 3.0, 1e6}) {
            GridFunction cf = f;
            for (double& v : cf.values) v *= c;
            CHECK(osc_log(cf) == doctest::Approx(osc_log(f)).epsilon(1e-12));
            CHECK(norm_l1(cf) == doctest::Approx(c * norm_l1(f)).epsilon(1e-12));
            CHECK(norm_sup(cf) == doctest::Approx(c * norm_sup(f)).epsilon(1e-12));
        }
    }
}
