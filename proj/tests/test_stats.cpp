#include <doctest.h>

#include <cmath>
#include <random>

#include "she/stats.hpp"

using namespace she;

TEST_CASE("mean and sample_stddev") {
    CHECK(mean({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
    CHECK(sample_stddev({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) ==
          doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-12));
    CHECK_THROWS(mean({}));
    CHECK_THROWS(sample_stddev({1.0}));
}

TEST_CASE("ols_slope") {
    CHECK(ols_slope({0, 1, 2, 3}, {5, 3, 1, -1}) == doctest::Approx(-2.0).epsilon(1e-13));
    // Exact fit plus symmetric residuals leaves the slope unchanged.
    CHECK(ols_slope({0, 1, 2, 3}, {0.1, 1.0 - 0.1, 2.0 + 0.1, 3.0 - 0.1}) ==
          doctest::Approx(0.96).epsilon(1e-12));
    CHECK_THROWS(ols_slope({1, 1, 1}, {1, 2, 3}));
    CHECK_THROWS(ols_slope({1, 2}, {1, 2, 3}));
}

TEST_CASE("one-sample KS accepts Gaussian data and rejects uniform") {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::vector<double> gauss, unif;
    for (int i = 0; i < 2000; ++i) {
        gauss.push_back(nd(rng));
        unif.push_back(ud(rng));
    }
    KsResult g = ks_test_standard_normal(gauss);
    CHECK(g.statistic < 0.05);
    CHECK(g.p_value > 0.01);
    KsResult u = ks_test_standard_normal(unif);
    CHECK(u.p_value < 1e-6);
    CHECK_THROWS(ks_test_standard_normal({0.0, 1.0}));
}

TEST_CASE("one-sample KS p-values are roughly uniform under the null") {
    std::mt19937_64 rng(9001);
    std::normal_distribution<double> nd;
    int below_half = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> xs;
        for (int i = 0; i < 300; ++i) xs.push_back(nd(rng));
        if (ks_test_standard_normal(xs).p_value < 0.5) ++below_half;
    }
    // Binomial(200, ~0.5): 3 sigma is ~21; the asymptotic p is slightly
    // conservative so allow a generous band.
    CHECK(below_half > 60);
    CHECK(below_half < 140);
}

TEST_CASE("two-sample KS") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    std::vector<double> a, b, c;
    for (int i = 0; i < 1500; ++i) {
        a.push_back(nd(rng));
        b.push_back(nd(rng));
        c.push_back(nd(rng) + 0.5);  // shifted by half a sigma
    }
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    CHECK(ks_test_two_sample(a, c).p_value < 1e-6);
    CHECK_THROWS(ks_test_two_sample({1, 2, 3}, a));
}
