#pragma once

#include <cstdint>
#include <vector>

#include "she/record.hpp"
#include "she/solver.hpp"
#include "she/stats.hpp"

namespace she {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // from interval-doubling comparison
    int nodes_used = 0;
};

// Closed-form Lyapunov exponent of the linear-sigma equation by quadrature:
// (1/pi)(Q/2)^6 e^{(pi/Q)^2} int_0^inf sinh(y)/cosh(y/2)^6 sin(2 pi y/Q^2) e^{-(y/Q)^2} dy.
// Valid for Q in [0.5, 8]; outside, the oscillatory cancellation against the
// exponential prefactor exceeds what the extended-precision accumulator covers.
QuadratureResult gk_lambda(double q);

struct SlopeEstimate {
    double lambda_hat = 0.0;
    double stderr_ = 0.0;  // across paths
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::vector<double> per_path_slopes;
};

// -mean least-squares slope of (log_mass + log sup field) over [t_lo, t_hi].
SlopeEstimate estimate_lambda(const std::vector<RunRecord>& records, double t_lo, double t_hi);

struct SubadditiveEstimate {
    std::vector<double> epoch_means;  // E[log S_n] for n = 1..n_epochs
    std::vector<double> epoch_stderr;
    std::vector<double> running_inf;  // inf_{m<=n} E[log S_m]/m
    double lambda_hat = 0.0;          // -running_inf.back()
};

// Kingman-style estimator: runs a fresh ensemble from u0 = 1 and takes the
// running infimum of E[log S_n]/n.
SubadditiveEstimate estimate_lambda_subadditive(const PathConfig& cfg, std::uint64_t seed,
                                                int n_paths, int n_epochs);

struct CltReport {
    double ks_statistic = 0.0;
    double p_value = 0.0;
    std::vector<double> sample;  // standardized (log u(t,0) + lambda t)/sqrt(t)
};

CltReport clt_diagnostic(const std::vector<RunRecord>& records, double lambda, double t);

}  // namespace she
