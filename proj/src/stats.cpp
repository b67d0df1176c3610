#include "she/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "she/kernel.hpp"  // normal_cdf

namespace she {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::domain_error("sample_stddev: need >= 2 points");
    double m = mean(xs), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::domain_error("ols_slope: need matched samples of size >= 2");
    double mx = mean(xs), my = mean(ys), sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("ols_slope: degenerate abscissae");
    return sxy / sxx;
}

namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        s += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

}  // namespace

KsResult ks_test_standard_normal(std::vector<double> sample) {
    const auto n = sample.size();
    if (n < 8) throw std::domain_error("ks_test_standard_normal: sample too small");
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = normal_cdf(sample[i]);
        double lo = static_cast<double>(i) / static_cast<double>(n);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max({d, f - lo, hi - f});
    }
    const double rn = std::sqrt(static_cast<double>(n));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
    return r;
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 8 || b.size() < 8) throw std::domain_error("ks_test_two_sample: samples too small");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

}  // namespace she
