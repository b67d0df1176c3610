#include "she/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "she/kernel.hpp"
#include "she/noise.hpp"

namespace she {

namespace {

double reconstructed_log_sup(const Sample& s) { return s.log_mass + s.log_sup; }
double reconstructed_mass(const Sample& s) { return std::exp(s.log_mass + s.log_l1); }

const Sample& nearest_sample(const RunRecord& r, double t) {
    const Sample* best = &r.series.front();
    for (const auto& s : r.series)
        if (std::fabs(s.time - t) < std::fabs(best->time - t)) best = &s;
    return *best;
}

bool exclusion_ok(const ExperimentConfig& cfg, const std::vector<RunRecord>& records,
                  nlohmann::json& j) {
    int excluded = 0;
    usable_records(records, cfg, &excluded);
    double frac = records.empty() ? 0.0
                                  : static_cast<double>(excluded) / static_cast<double>(records.size());
    j["paths_excluded"] = excluded;
    j["excluded_fraction"] = frac;
    return frac <= cfg.excluded_path_fraction_max;
}

}  // namespace

Report kernel_check(int n_points, int n_random_fields, std::uint64_t rng_seed) {
    Report rep;
    nlohmann::json& j = rep.summary;
    const TorusGrid grid(n_points);
    const KernelConfig cfg;
    bool ok = true;

    // Normalization: dx * sum_j p_t(x_i - x_j) = 1; circulant, so one row suffices.
    {
        double worst = 0.0;
        for (double t : {1e-3, 1e-2, 0.1, 0.25, 0.5, 1.0, 10.0}) {
            double s = 0.0;
            for (int d = 0; d < n_points; ++d) s += heat_kernel(t, d * grid.spacing, 0.0, cfg);
            worst = std::max(worst, std::fabs(grid.spacing * s - 1.0));
        }
        j["normalization_err"] = worst;
        ok = ok && worst <= 1e-9;
    }
    // Symmetry.
    {
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double x = u(rng), y = u(rng), t = 0.01 + 0.5 * (u(rng) + 1.0);
            worst = std::max(worst, std::fabs(heat_kernel(t, x, y, cfg) - heat_kernel(t, y, x, cfg)));
        }
        j["symmetry_err"] = worst;
        ok = ok && worst <= 1e-12;
    }
    // Semigroup composition on a smooth field.
    {
        GridFunction f = GridFunction::sample(
            grid, [](double x) { return 1.0 + std::cos(M_PI * x) + 0.5 * std::cos(2 * M_PI * x); });
        double worst = 0.0;
        for (auto [s, t] : {std::pair{0.1, 0.2}, std::pair{0.05, 0.5}, std::pair{0.2, 0.2}}) {
            GridFunction a = semigroup_apply(s, semigroup_apply(t, f, cfg), cfg);
            GridFunction b = semigroup_apply(s + t, f, cfg);
            for (int i = 0; i < n_points; ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
        }
        j["semigroup_err"] = worst;
        ok = ok && worst <= 1e-7;
    }
    // Image vs spectral representations around the crossover.
    {
        double worst = 0.0;
        for (double t : {0.15, 0.2, 0.25, 0.3, 0.35})
            for (int d = 0; d < n_points; d += 7) {
                double z = d * grid.spacing;
                worst = std::max(worst, std::fabs(heat_kernel_image(t, z, 1e-13) -
                                                  heat_kernel_spectral(t, z, 1e-13)));
            }
        j["representation_err"] = worst;
        ok = ok && worst <= 1e-10;
    }
    // Long-time limit and pointwise bound and positivity.
    {
        double err = std::fabs(heat_kernel(10.0, 0.0, 0.0, cfg) - 0.5);
        j["long_time_err"] = err;
        ok = ok && err <= 1e-12;

        bool bound_ok = true, positive = true;
        for (double t : {1e-3, 0.01, 0.1, 0.25, 1.0, 2.0}) {
            double cap = 2.0 * std::max(1.0, 1.0 / std::sqrt(t));
            for (int d = 0; d < n_points; ++d) {
                double p = heat_kernel(t, d * grid.spacing, 0.0, cfg);
                bound_ok = bound_ok && p <= cap;
                positive = positive && p > 0.0;
            }
        }
        j["pointwise_bound_ok"] = bound_ok;
        j["positivity_ok"] = positive;
        ok = ok && bound_ok && positive;
    }
    // Lipschitz lemma on random non-negative fields.
    {
        std::mt19937_64 rng(rng_seed + 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int pass_count = 0, total = 0;
        for (int i = 0; i < n_random_fields; ++i) {
            GridFunction f(grid);
            for (int k = 0; k < n_points; ++k) f[k] = u(rng);
            for (double t : {0.01, 0.1, 1.0}) {
                ++total;
                if (check_lipschitz_bound(t, f, cfg).pass) ++pass_count;
            }
        }
        j["lipschitz_pass"] = pass_count;
        j["lipschitz_total"] = total;
        ok = ok && pass_count == total;
    }
    // Ball-mass lemma sweep.
    {
        int pass_count = 0, total = 0;
        BallMassReport last;
        for (double t : {0.01, 0.04})
            for (double c : {1.0, 1.5})
                for (int ai = 0; ai < n_points; ai += n_points / 8) {
                    ++total;
                    last = check_ball_mass(t, grid.point(ai), c, grid, cfg);
                    if (last.pass) ++pass_count;
                }
        j["ball_mass_pass"] = pass_count;
        j["ball_mass_total"] = total;
        j["ball_mass_constant"] = last.bound_constant;
        j["chi_log_reading"] = last.chi_log_reading;
        j["chi_lin_reading"] = last.chi_lin_reading;
        ok = ok && pass_count == total;
    }
    rep.pass = ok;
    return rep;
}

Report exp_lambda_vs_formula(const ExperimentConfig& cfg, int workers,
                             const EnsembleResult* prerun) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "lambda_vs_formula";

    EnsembleResult local;
    const EnsembleResult& ens = prerun ? *prerun : (local = run_ensemble(cfg, workers), local);
    bool ok = exclusion_ok(cfg, ens.records, j);

    SlopeEstimate est = estimate_lambda(ens.records, cfg.horizon / 2.0, cfg.horizon);
    j["lambda_hat"] = est.lambda_hat;
    j["stderr"] = est.stderr_;
    j["window"] = {est.t_lo, est.t_hi};

    if (cfg.sigma_kind == "zero") {
        j["note"] = "zero sigma: deterministic decay only, lambda must vanish";
        rep.pass = ok && std::fabs(est.lambda_hat) <= 1e-12;
        return rep;
    }
    if (cfg.sigma_kind != "linear")
        throw config_error("exp_lambda_vs_formula: linear sigma required");

    QuadratureResult gk = gk_lambda(cfg.q);
    j["gk_lambda"] = gk.value;
    j["gk_error_estimate"] = gk.error_estimate;
    j["gk_nodes"] = gk.nodes_used;
    j["ratio"] = est.lambda_hat / gk.value;
    double tol = std::max(0.15 * gk.value, 3.0 * est.stderr_);
    bool match = std::fabs(est.lambda_hat - gk.value) <= tol;
    j["match_tolerance"] = tol;
    j["match"] = match;
    if (!match)
        j["note"] = "persistent constant-ratio mismatch between simulation and quadrature; "
                    "reported, not corrected (circumference normalization question)";

    // Second initial profile: u0-independence of the exponent.
    ExperimentConfig cfg2 = cfg;
    cfg2.initial_kind = "constant";
    cfg2.initial_value = 5.0 * cfg.initial_value;
    cfg2.seed = cfg.seed + 1000003;
    cfg2.n_paths = std::max(8, cfg.n_paths / 2);
    EnsembleResult ens2 = run_ensemble(cfg2, workers);
    SlopeEstimate est2 = estimate_lambda(ens2.records, cfg.horizon / 2.0, cfg.horizon);
    j["lambda_hat_alt_u0"] = est2.lambda_hat;
    j["stderr_alt_u0"] = est2.stderr_;
    double comb = 3.0 * std::sqrt(est.stderr_ * est.stderr_ + est2.stderr_ * est2.stderr_);
    bool indep = std::fabs(est.lambda_hat - est2.lambda_hat) <= comb;
    j["u0_independence"] = indep;

    rep.pass = ok && match && indep;
    return rep;
}

Report exp_oscillation_scaling(const ExperimentConfig& cfg, const EnsembleResult& ens) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "oscillation_scaling";
    bool ok = exclusion_ok(cfg, ens.records, j);

    const double t_lo = std::max(10.0, cfg.horizon / 4.0);
    auto usable = usable_records(ens.records, cfg);
    double worst = 0.0;
    for (const auto* r : usable)
        for (const auto& s : r->series)
            if (s.time >= t_lo) worst = std::max(worst, s.osc / s.time);
    j["window_start"] = t_lo;
    j["max_osc_over_t"] = worst;
    j["osc_over_t_cap"] = cfg.osc_over_t_max;
    bool capped = worst <= cfg.osc_over_t_max;

    // Ensemble-mean osc/t over [10, T] should trend down.
    std::vector<double> ts, ys;
    for (const auto& s0 : usable.front()->series) {
        if (s0.time < 10.0) continue;
        double acc = 0.0;
        for (const auto* r : usable) acc += nearest_sample(*r, s0.time).osc / s0.time;
        ts.push_back(s0.time);
        ys.push_back(acc / static_cast<double>(usable.size()));
    }
    double trend = ols_slope(ts, ys);
    j["osc_over_t_trend"] = trend;
    bool trending_down = trend <= 0.0;

    // Normalized curves at the horizon; the exponent-10 question stays open,
    // so these are reported, never asserted.
    for (double p : {1.0, 2.0, 10.0}) {
        double acc = 0.0;
        for (const auto* r : usable) {
            const Sample& s = r->series.back();
            acc += s.osc / std::pow(std::log(std::max(s.time, 3.0)), p);
        }
        j["osc_over_logt_p" + std::to_string(static_cast<int>(p))] =
            acc / static_cast<double>(usable.size());
    }

    rep.pass = ok && capped && trending_down;
    return rep;
}

Report exp_ratio_interpolation(const ExperimentConfig& cfg, const EnsembleResult& ens) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "ratio_interpolation";
    bool ok = exclusion_ok(cfg, ens.records, j);

    auto usable = usable_records(ens.records, cfg);
    double worst_excess = -1e300;
    bool bounded = true;
    for (const auto* r : usable)
        for (const auto& s : r->series) {
            if (s.time < 10.0) continue;
            double gap = s.log_sup - s.log_l1;
            double cap = cfg.ratio_gap_beta * std::log(std::log(s.time)) + cfg.ratio_gap_c;
            worst_excess = std::max(worst_excess, gap - cap);
            bounded = bounded && gap <= cap;
        }
    j["beta"] = cfg.ratio_gap_beta;
    j["c"] = cfg.ratio_gap_c;
    j["worst_excess_over_cap"] = worst_excess;
    // gap := log sup - log L1; a constant field gives exactly -log 2.
    j["gap_constant_convention"] = -std::log(2.0);
    rep.pass = ok && bounded;
    return rep;
}

namespace {

ExperimentConfig spike_run_config(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    const TorusGrid g = cfg.grid();
    if (cfg.peak_n > 1.0 / g.spacing)
        throw config_error("spike with sup " + std::to_string(cfg.peak_n) +
                           " is unrepresentable at spacing " + std::to_string(g.spacing));
    c.initial_kind = "spike";
    c.spike_mass = 1.0;
    c.spike_width = 1.0 / cfg.peak_n;
    c.horizon = std::pow(cfg.peak_n, -cfg.peak_gamma);
    const int steps = static_cast<int>(std::llround(c.horizon / c.effective_dt()));
    c.n_samples = std::min(4096, std::max(c.n_samples, 4 * steps));
    return c;
}

}  // namespace

Report exp_peak_taming(const ExperimentConfig& cfg, int workers) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "peak_taming";
    const double N = cfg.peak_n, gamma = cfg.peak_gamma;
    ExperimentConfig rc = spike_run_config(cfg);
    j["horizon"] = rc.horizon;

    EnsembleResult ens = run_ensemble(rc, workers);
    bool ok = exclusion_ok(rc, ens.records, j);
    auto usable = usable_records(ens.records, rc);

    const double level_scale = std::pow(N, gamma / 2.0);
    nlohmann::json freqs = nlohmann::json::object();
    double freq_at_k = 0.0;
    for (double K : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        int hits = 0;
        for (const auto* r : usable)
            if (std::exp(reconstructed_log_sup(r->series.back())) >= K * level_scale) ++hits;
        double f = static_cast<double>(hits) / static_cast<double>(usable.size());
        freqs[std::to_string(static_cast<int>(K))] = f;
        if (K == cfg.peak_k) freq_at_k = f;
    }
    j["exceedance_freq"] = freqs;
    j["freq_at_k"] = freq_at_k;

    int doubled = 0;
    for (const auto* r : usable) {
        double m = 0.0;
        for (const auto& s : r->series) m = std::max(m, reconstructed_log_sup(s));
        if (std::exp(m) >= 2.0 * N) ++doubled;
    }
    j["freq_sup_exceeds_2N"] = static_cast<double>(doubled) / static_cast<double>(usable.size());

    // Deterministic reduction: with sigma = 0 the spike obeys the kernel
    // pointwise bound sup P_t(spike) <= 2(1 v t^{-1/2}) * mass.
    {
        ExperimentConfig dc = rc;
        dc.sigma_kind = "zero";
        dc.n_paths = 1;
        EnsembleResult det = run_ensemble(dc, 1);
        bool det_ok = true;
        for (const auto& s : det.records.front().series) {
            if (s.time <= 0.0) continue;
            double cap = 2.0 * std::max(1.0, 1.0 / std::sqrt(s.time)) * dc.spike_mass * 1.0000001;
            det_ok = det_ok && std::exp(reconstructed_log_sup(s)) <= cap;
        }
        j["deterministic_bound_ok"] = det_ok;
        ok = ok && det_ok;
    }

    rep.pass = ok && freq_at_k <= cfg.exceed_freq_max;
    return rep;
}

Report exp_mass_valleys(const ExperimentConfig& cfg, int workers) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "mass_valleys";
    const double N = cfg.peak_n;
    ExperimentConfig rc = spike_run_config(cfg);
    j["horizon"] = rc.horizon;

    EnsembleResult ens = run_ensemble(rc, workers);
    bool ok = exclusion_ok(rc, ens.records, j);
    auto usable = usable_records(ens.records, rc);

    int exits = 0;
    for (const auto* r : usable) {
        bool out = false;
        for (const auto& s : r->series) {
            double m = reconstructed_mass(s);
            out = out || m < 0.5 || m > 2.0;
        }
        if (out) ++exits;
    }
    double exit_freq = static_cast<double>(exits) / static_cast<double>(usable.size());
    j["mass_exit_freq"] = exit_freq;

    // Microscopic window t << N^-2: mean |M_t - M_0| stays under 3 N sqrt(t).
    bool micro_ok = true;
    nlohmann::json overlay = nlohmann::json::array();
    const double t_micro = std::pow(N, -2.0);
    for (const auto& s0 : usable.front()->series) {
        if (s0.time <= 0.0 || s0.time > t_micro) continue;
        double acc = 0.0;
        for (const auto* r : usable) {
            const auto& s = nearest_sample(*r, s0.time);
            acc += std::fabs(reconstructed_mass(s) - reconstructed_mass(r->series.front()));
        }
        double dev = acc / static_cast<double>(usable.size());
        double cap = 3.0 * N * std::sqrt(s0.time);
        overlay.push_back({{"t", s0.time}, {"mean_abs_dev", dev}, {"cap", cap}});
        micro_ok = micro_ok && dev <= cap;
    }
    j["micro_window_overlay"] = overlay;
    j["micro_window_ok"] = micro_ok;

    rep.pass = ok && exit_freq <= cfg.mass_exit_freq_max && micro_ok;
    return rep;
}

Report exp_clt(const ExperimentConfig& cfg, int workers, const EnsembleResult* prerun) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "clt_diagnostic";
    EnsembleResult local;
    const EnsembleResult& ens = prerun ? *prerun : (local = run_ensemble(cfg, workers), local);
    bool ok = exclusion_ok(cfg, ens.records, j);

    SlopeEstimate est = estimate_lambda(ens.records, cfg.horizon / 2.0, cfg.horizon);
    CltReport clt = clt_diagnostic(ens.records, est.lambda_hat, cfg.horizon);
    j["lambda_hat"] = est.lambda_hat;
    j["ks_statistic"] = clt.ks_statistic;
    j["p_value"] = clt.p_value;
    bool normal = clt.p_value > 0.01;
    j["normality"] = normal;
    if (!normal) {
        j["note"] = "Gaussian-limit KS check below threshold; asymptotic claim, soft criterion";
        rep.warning = true;
    }
    rep.pass = ok;  // soft: a KS failure downgrades to a warning
    return rep;
}

Report exp_martingale(const ExperimentConfig& cfg, int workers) {
    Report rep;
    nlohmann::json& j = rep.summary;
    j["name"] = "martingale";
    EnsembleResult ens = run_ensemble(cfg, workers, /*track_martingale=*/true);
    bool ok = exclusion_ok(cfg, ens.records, j);
    auto usable = usable_records(ens.records, cfg);

    const double m0 = reconstructed_mass(usable.front()->series.front());
    nlohmann::json checkpoints = nlohmann::json::array();
    bool mean_ok = true;
    for (int k = 1; k <= 5; ++k) {
        double t = cfg.horizon * k / 5.0;
        std::vector<double> ms;
        for (const auto* r : usable) ms.push_back(reconstructed_mass(nearest_sample(*r, t)));
        double m = mean(ms);
        double se = sample_stddev(ms) / std::sqrt(static_cast<double>(ms.size()));
        bool pass = std::fabs(m - m0) <= 3.0 * se;
        checkpoints.push_back({{"t", t}, {"mean_mass", m}, {"stderr", se}, {"pass", pass}});
        mean_ok = mean_ok && pass;
    }
    j["initial_mass"] = m0;
    j["checkpoints"] = checkpoints;

    double qv = 0.0, th = 0.0;
    for (const auto* r : usable) {
        qv += r->mass_qv;
        th += r->sigma_l2_integral;
    }
    qv /= static_cast<double>(usable.size());
    th /= static_cast<double>(usable.size());
    j["empirical_qv"] = qv;
    j["predicted_qv"] = th;
    bool qv_ok = th > 0.0 && std::fabs(qv - th) <= 0.10 * th;
    j["qv_within_10pct"] = qv_ok;

    rep.pass = ok && mean_ok && qv_ok;
    return rep;
}

}  // namespace she
