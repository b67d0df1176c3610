#pragma once

#include <vector>

namespace she {

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

// Least-squares slope of ys against xs.
double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov distance to the standard normal, asymptotic
// p-value with the usual sqrt(n) correction.
KsResult ks_test_standard_normal(std::vector<double> sample);

// Two-sample Kolmogorov-Smirnov test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace she
