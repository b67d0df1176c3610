#pragma once

#include <string>

#include "she/harness.hpp"
#include "she/lyapunov.hpp"

#include <json.hpp>

namespace she {

struct Report {
    bool pass = false;
    bool warning = false;  // soft failures downgrade to warnings
    nlohmann::json summary;
};

// Kernel property suite: normalization, symmetry, semigroup composition,
// dual-representation agreement, long-time limit, Lipschitz and ball-mass
// lemma checks over random fields.
Report kernel_check(int n_points = 256, int n_random_fields = 100,
                    std::uint64_t rng_seed = 20240801);

// Ensemble + slope estimator vs the closed-form quadrature, with a second
// initial profile for u0-independence.
Report exp_lambda_vs_formula(const ExperimentConfig& cfg, int workers,
                             const EnsembleResult* prerun = nullptr);

// Oscillation-of-log sublinearity statistics on an existing ensemble.
Report exp_oscillation_scaling(const ExperimentConfig& cfg, const EnsembleResult& ens);

// log sup - log L1 gap against beta*log log t + C.
Report exp_ratio_interpolation(const ExperimentConfig& cfg, const EnsembleResult& ens);

// Tall-peak smoothing frequencies from a spike start.
Report exp_peak_taming(const ExperimentConfig& cfg, int workers);

// Mass exit frequencies from a spike start.
Report exp_mass_valleys(const ExperimentConfig& cfg, int workers);

// Gaussian-limit KS diagnostic (soft criterion).
Report exp_clt(const ExperimentConfig& cfg, int workers, const EnsembleResult* prerun = nullptr);

// Total-mass martingale and quadratic-variation checks.
Report exp_martingale(const ExperimentConfig& cfg, int workers);

}  // namespace she
