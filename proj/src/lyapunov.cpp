#include "she/lyapunov.hpp"

#include <quadmath.h>

#include <cmath>
#include <stdexcept>

namespace she {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], computed in __float128 by Newton
// iteration so the quadrature is not limited by double-precision literals.
struct GaussRule {
    std::vector<__float128> x, w;
};

GaussRule legendre_rule(int n) {
    GaussRule r;
    r.x.resize(static_cast<size_t>(n));
    r.w.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        __float128 x = cosq(M_PIq * (i + 0.75Q) / (n + 0.5Q));
        __float128 dp = 0;
        for (int it = 0; it < 60; ++it) {
            __float128 p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                __float128 p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            __float128 dx = p1 / dp;
            x -= dx;
            if (fabsq(dx) < 1e-32Q) break;
        }
        r.x[static_cast<size_t>(i)] = x;
        r.w[static_cast<size_t>(i)] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

__float128 integrand(__float128 y, __float128 q) {
    __float128 c = coshq(y / 2);
    __float128 c2 = c * c;
    return sinhq(y) / (c2 * c2 * c2) * sinq(2 * M_PIq * y / (q * q)) * expq(-(y / q) * (y / q));
}

// Composite Gauss-Legendre over [0, upper] with the given panel width.
__float128 composite(const GaussRule& rule, __float128 q, __float128 upper, __float128 h,
                     int* nodes) {
    __float128 s = 0;
    for (__float128 a = 0; a < upper; a += h) {
        __float128 b = a + h < upper ? a + h : upper;
        __float128 mid = (a + b) / 2, half = (b - a) / 2;
        __float128 ps = 0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            ps += rule.w[i] * integrand(mid + half * rule.x[i], q);
            ++*nodes;
        }
        s += half * ps;
    }
    return s;
}

}  // namespace

QuadratureResult gk_lambda(double q) {
    if (!(q >= 0.5 && q <= 8.0))
        throw std::domain_error(
            "gk_lambda: Q outside [0.5, 8]; the e^{(pi/Q)^2} prefactor against the oscillatory "
            "integral cancels beyond what the extended-precision accumulator can resolve "
            "(small Q) or overflows the tail bound (large Q)");
    static const GaussRule rule = legendre_rule(24);
    const __float128 Q = q;
    const double tol = 1e-12;
    // Integrand <= C e^{-2y} for y >= 4; this upper limit pushes both the
    // Gaussian and the exponential tail below tol.
    const __float128 upper = fmaxq(8.0Q, 3 * Q * sqrtq(logq(1 / (__float128)tol)));
    // Panels resolve the sin(2 pi y / Q^2) oscillation.
    const __float128 h = fminq(0.5Q, Q * Q / 8);

    QuadratureResult res;
    int nodes = 0;
    __float128 coarse = composite(rule, Q, upper, h, &nodes);
    __float128 fine = composite(rule, Q, upper, h / 2, &nodes);
    __float128 pref = (1 / M_PIq) * powq(Q / 2, 6) * expq((M_PIq / Q) * (M_PIq / Q));
    res.value = static_cast<double>(pref * fine);
    res.error_estimate = std::fabs(static_cast<double>(pref * (fine - coarse)));
    res.nodes_used = nodes;
    return res;
}

SlopeEstimate estimate_lambda(const std::vector<RunRecord>& records, double t_lo, double t_hi) {
    SlopeEstimate est;
    est.t_lo = t_lo;
    est.t_hi = t_hi;
    double horizon = 0.0;
    for (const auto& r : records)
        if (r.ok && !r.series.empty()) horizon = std::max(horizon, r.series.back().time);
    if (!(t_hi - t_lo >= 0.5 * horizon * (1.0 - 1e-9)))
        throw std::domain_error("estimate_lambda: window shorter than half the horizon");
    for (const auto& r : records) {
        if (!r.ok) continue;
        std::vector<double> ts, ys;
        for (const auto& s : r.series) {
            if (s.time >= t_lo - 1e-9 && s.time <= t_hi + 1e-9) {
                ts.push_back(s.time);
                ys.push_back(s.log_mass + s.log_sup);
            }
        }
        if (ts.size() >= 2) est.per_path_slopes.push_back(ols_slope(ts, ys));
    }
    if (est.per_path_slopes.size() < 8)
        throw std::domain_error("estimate_lambda: need at least 8 usable paths");
    est.lambda_hat = -mean(est.per_path_slopes);
    est.stderr_ = sample_stddev(est.per_path_slopes) /
                  std::sqrt(static_cast<double>(est.per_path_slopes.size()));
    return est;
}

SubadditiveEstimate estimate_lambda_subadditive(const PathConfig& cfg, std::uint64_t seed,
                                                int n_paths, int n_epochs) {
    if (!cfg.sigma.is_linear())
        throw config_error("estimate_lambda_subadditive: linear sigma required");
    PathConfig pc = cfg;
    pc.horizon = static_cast<double>(n_epochs);
    pc.sample_times.clear();
    for (int n = 1; n <= n_epochs; ++n) pc.sample_times.push_back(static_cast<double>(n));
    const GridFunction one(pc.grid, 1.0);

    std::vector<std::vector<double>> log_s(static_cast<size_t>(n_epochs));
    for (int p = 0; p < n_paths; ++p) {
        NoiseStream noise(seed, static_cast<std::uint64_t>(p), pc.grid, pc.dt);
        RunRecord rec = run_path(pc, one, noise);
        if (!rec.ok) continue;
        for (const auto& s : rec.series) {
            int n = static_cast<int>(std::llround(s.time));
            if (n >= 1 && n <= n_epochs)
                log_s[static_cast<size_t>(n - 1)].push_back(s.log_mass + s.log_sup);
        }
    }
    SubadditiveEstimate est;
    double inf = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_epochs; ++n) {
        const auto& xs = log_s[static_cast<size_t>(n - 1)];
        if (xs.empty()) throw std::runtime_error("estimate_lambda_subadditive: no surviving paths");
        double m = mean(xs);
        est.epoch_means.push_back(m);
        est.epoch_stderr.push_back(xs.size() > 1
                                       ? sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()))
                                       : 0.0);
        inf = std::min(inf, m / n);
        est.running_inf.push_back(inf);
    }
    est.lambda_hat = -est.running_inf.back();
    return est;
}

CltReport clt_diagnostic(const std::vector<RunRecord>& records, double lambda, double t) {
    std::size_t usable = 0;
    double horizon = 0.0;
    for (const auto& r : records)
        if (r.ok && !r.series.empty()) {
            ++usable;
            horizon = std::max(horizon, r.series.back().time);
        }
    if (usable < 200) throw std::domain_error("clt_diagnostic: need >= 200 paths");
    if (!(t >= 0.5 * horizon * (1.0 - 1e-9)))
        throw std::domain_error("clt_diagnostic: t must be at least half the horizon");
    std::vector<double> raw;
    for (const auto& r : records) {
        if (!r.ok || r.series.empty()) continue;
        const Sample* best = nullptr;
        for (const auto& s : r.series)
            if (!best || std::fabs(s.time - t) < std::fabs(best->time - t)) best = &s;
        raw.push_back((best->log_mass + best->log_center + lambda * best->time) /
                      std::sqrt(best->time));
    }
    double m = mean(raw), sd = sample_stddev(raw);
    // Spread at rounding level means the sample is deterministic; standardizing
    // it would just amplify summation noise.
    if (!std::isfinite(sd) || sd <= 1e-9 * (std::fabs(m) + 1.0))
        throw std::domain_error("clt_diagnostic: degenerate sample");
    CltReport rep;
    for (double x : raw) rep.sample.push_back((x - m) / sd);
    KsResult ks = ks_test_standard_normal(rep.sample);
    rep.ks_statistic = ks.statistic;
    rep.p_value = ks.p_value;
    return rep;
}

}  // namespace she
