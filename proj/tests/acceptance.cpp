// Acceptance suite: one pass/fail line per criterion, exit 0 only if every
// hard criterion passes (the CLT diagnostic is soft and downgrades to WARN).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "she/experiments.hpp"
#include "she/harness.hpp"
#include "she/kernel.hpp"

using namespace she;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void emit(int criterion, bool pass, bool warn_only, double secs, const std::string& detail) {
    const char* verdict = pass ? "PASS" : (warn_only ? "WARN" : "FAIL");
    std::printf("criterion %2d: %s  (%.1fs)  %s\n", criterion, verdict, secs, detail.c_str());
    std::fflush(stdout);
    if (!pass && !warn_only) ++g_failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Kernel property and lemma suites.
void criterion_1() {
    Timer t;
    Report rep = kernel_check(256, 100, 20240801);
    std::ostringstream d;
    d << "kernel suite: normalization_err=" << rep.summary["normalization_err"].get<double>()
      << " representation_err=" << rep.summary["representation_err"].get<double>()
      << " lipschitz=" << rep.summary["lipschitz_pass"].get<int>() << "/"
      << rep.summary["lipschitz_total"].get<int>()
      << " ball_mass=" << rep.summary["ball_mass_pass"].get<int>() << "/"
      << rep.summary["ball_mass_total"].get<int>();
    bool pass = rep.pass && t.secs() < 30.0;
    emit(1, pass, false, t.secs(), d.str());
}

// 2. Deterministic heat-equation reduction.
void criterion_2() {
    Timer t;
    TorusGrid g(256);
    const double dt = 1e-4;
    Solver solver(g, dt, Scheme::semi_implicit_em, SigmaSpec::zero());
    GridFunction u0 = GridFunction::sample(g, [](double x) { return 2.0 + std::cos(M_PI * x); });
    SolverState st = solver.initial_state(u0);
    NoiseStream noise(1, 0, g, dt);
    double mass_prev = norm_l1(st.field), worst_mass_drift = 0.0;
    for (int k = 0; k < 10000; ++k) {
        solver.step(st, noise);
        double mass = norm_l1(st.field);
        worst_mass_drift = std::max(worst_mass_drift, std::fabs(mass - mass_prev));
        mass_prev = mass;
    }
    double worst = 0.0;
    const double decay = std::exp(-M_PI * M_PI);
    for (int j = 0; j < g.n_points; ++j)
        worst = std::max(worst, std::fabs(st.field[j] - (2.0 + decay * std::cos(M_PI * g.point(j)))));
    std::ostringstream d;
    d << "eigenmode decay err=" << worst << " (tol 1e-3), per-step mass drift="
      << worst_mass_drift << " (tol 1e-10)";
    emit(2, worst <= 1e-3 && worst_mass_drift <= 1e-10 && t.secs() < 60.0, false, t.secs(), d.str());
}

// 3. Exact algebraic identities.
void criterion_3() {
    Timer t;
    bool pass = true;
    std::ostringstream d;

    // Linear-sigma scale equivariance under the same stream.
    {
        TorusGrid g(64);
        const SigmaSpec sig = SigmaSpec::linear(1.0);
        const double dt = Solver::default_dt(g, sig);
        NoiseStream noise(42, 0, g, dt);
        Solver solver(g, dt, Scheme::semi_implicit_em, sig);
        SolverState a = solver.initial_state(GridFunction(g, 1.0));
        SolverState b = solver.initial_state(GridFunction(g, 5.0));
        for (int k = 0; k < 4000; ++k) {
            solver.step(a, noise);
            solver.step(b, noise);
        }
        double worst = 0.0;
        for (int j = 0; j < g.n_points; ++j)
            worst = std::max(worst, std::fabs(b.field[j] / (5.0 * a.field[j]) - 1.0));
        d << "scale_equivariance_err=" << worst;
        pass = pass && worst <= 1e-12;
    }
    // Renormalized run vs direct run.
    {
        TorusGrid g(64);
        const SigmaSpec sig = SigmaSpec::linear(1.0);
        const double dt = Solver::default_dt(g, sig);
        const double T = 3.0;
        NoiseStream noise(515, 0, g, dt);
        Solver solver(g, dt, Scheme::semi_implicit_em, sig);
        SolverState direct = solver.initial_state(GridFunction(g, 1.0));
        const auto n_steps = static_cast<std::uint64_t>(std::llround(T / dt));
        for (std::uint64_t k = 0; k < n_steps; ++k) solver.step(direct, noise);
        PathConfig pc{g, dt, T, Scheme::semi_implicit_em, sig,
                      RenormSchedule::make(6.0, 3.5, dt, T), true, false, {T}};
        RunRecord rec = run_path(pc, GridFunction(g, 1.0), noise);
        double err = rec.ok ? std::fabs(rec.series.back().log_mass + rec.series.back().log_sup -
                                        std::log(norm_sup(direct.field)))
                            : 1.0;
        d << " renorm_roundtrip_err=" << err;
        pass = pass && err <= 1e-10;
    }
    // Shift semigroup law, bit-exact.
    {
        TorusGrid g(32);
        NoiseStream s(7, 3, g, 1e-4);
        bool exact = true;
        for (std::int64_t a : {1, 100, 99991})
            for (std::int64_t b : {0, 17, 4096})
                exact = exact && s.shifted(a).shifted(b).increments(5) ==
                                     s.shifted(a + b).increments(5);
        d << " shift_semigroup_bit_exact=" << (exact ? "yes" : "no");
        pass = pass && exact;
    }
    // rescale_sigma leaves linear sigma untouched.
    {
        SigmaSpec lin = SigmaSpec::linear(2.0);
        SigmaSpec r = rescale_sigma(lin, 123.456);
        bool exact = r.kind == SigmaSpec::Kind::linear && r.q == lin.q &&
                     r.lipschitz_constant == lin.lipschitz_constant;
        d << " rescale_linear_exact=" << (exact ? "yes" : "no");
        pass = pass && exact;
    }
    emit(3, pass && t.secs() < 60.0, false, t.secs(), d.str());
}

// 4. Pathwise comparison and subadditivity.
void criterion_4() {
    Timer t;
    TorusGrid g(64);
    int comparison_pass = 0;
    {
        SigmaSpec sig = SigmaSpec::piecewise({1.0}, {1.0, 0.25});
        const double dt = Solver::default_dt(g, sig);
        PathConfig pc{g, dt, 5.0, Scheme::semi_implicit_em, sig,
                      RenormSchedule::none(), false, false, {}};
        GridFunction lo(g, 1.0);
        GridFunction hi = GridFunction::sample(
            g, [](double x) { return 1.0 + std::cos(M_PI * x) * std::cos(M_PI * x); });
        for (std::uint64_t p = 0; p < 100; ++p)
            if (coupled_pair(pc, lo, hi, NoiseStream(81001, p, g, dt)).pass) ++comparison_pass;
    }
    int subadd_pass = 0;
    {
        SigmaSpec sig = SigmaSpec::linear(1.0);
        const double dt = Solver::default_dt(g, sig);
        PathConfig pc{g, dt, 2.0, Scheme::semi_implicit_em, sig,
                      RenormSchedule::none(), true, false, {}};
        for (std::uint64_t p = 0; p < 100; ++p)
            if (subadditivity_check(pc, NoiseStream(81002, p, g, dt), 1.0, 1.0).pass) ++subadd_pass;
    }
    std::ostringstream d;
    d << "comparison=" << comparison_pass << "/100 subadditivity=" << subadd_pass << "/100";
    emit(4, comparison_pass == 100 && subadd_pass == 100 && t.secs() < 300.0, false, t.secs(),
         d.str());
}

// 5. Total-mass martingale and quadratic variation.
void criterion_5() {
    Timer t;
    ExperimentConfig cfg;
    cfg.name = "acceptance_martingale";
    cfg.n_points = 64;
    cfg.horizon = 1.0;
    cfg.n_paths = 400;
    cfg.seed = 20240805;
    Report rep = exp_martingale(cfg, 2);
    std::ostringstream d;
    d << "mean-mass checkpoints + QV: empirical_qv=" << rep.summary["empirical_qv"].get<double>()
      << " predicted_qv=" << rep.summary["predicted_qv"].get<double>()
      << " within_10pct=" << rep.summary["qv_within_10pct"].get<bool>();
    emit(5, rep.pass && t.secs() < 300.0, false, t.secs(), d.str());
}

// 6 + 7. Lyapunov headline and oscillation/interpolation on the same ensemble.
void criteria_6_7() {
    Timer t;
    ExperimentConfig cfg;
    cfg.name = "acceptance_pam_q1";
    cfg.n_points = 128;
    cfg.horizon = 200.0;
    cfg.n_paths = 64;
    cfg.seed = 20240806;
    EnsembleResult ens = run_ensemble(cfg, 2);
    Report lam = exp_lambda_vs_formula(cfg, 2, &ens);
    {
        std::ostringstream d;
        d << "lambda_hat=" << lam.summary["lambda_hat"].get<double>()
          << " stderr=" << lam.summary["stderr"].get<double>()
          << " gk_lambda=" << lam.summary["gk_lambda"].get<double>()
          << " ratio=" << lam.summary["ratio"].get<double>()
          << " u0_independence=" << lam.summary["u0_independence"].get<bool>();
        emit(6, lam.pass, false, t.secs(), d.str());
    }
    Timer t7;
    Report osc = exp_oscillation_scaling(cfg, ens);
    Report ratio = exp_ratio_interpolation(cfg, ens);
    {
        std::ostringstream d;
        d << "max_osc_over_t=" << osc.summary["max_osc_over_t"].get<double>() << " (cap "
          << cfg.osc_over_t_max << "), gap_excess=" << ratio.summary["worst_excess_over_cap"].get<double>()
          << " (cap 0 at C=" << cfg.ratio_gap_c << ")";
        emit(7, osc.pass && ratio.pass, false, t7.secs(), d.str());
    }
}

// 8. Peak taming and mass valleys from a spike start.
void criterion_8() {
    Timer t;
    ExperimentConfig cfg;
    cfg.name = "acceptance_spike";
    cfg.n_points = 128;
    cfg.n_paths = 256;
    cfg.seed = 20240808;
    Report peaks = exp_peak_taming(cfg, 2);
    Report valleys = exp_mass_valleys(cfg, 2);
    std::ostringstream d;
    d << "exceedance_freq@K=8: " << peaks.summary["freq_at_k"].get<double>()
      << " mass_exit_freq=" << valleys.summary["mass_exit_freq"].get<double>()
      << " deterministic_bound_ok=" << peaks.summary["deterministic_bound_ok"].get<bool>();
    emit(8, peaks.pass && valleys.pass && t.secs() < 600.0, false, t.secs(), d.str());
}

// 9. CLT diagnostic (soft).
void criterion_9() {
    Timer t;
    ExperimentConfig cfg;
    cfg.name = "acceptance_clt";
    cfg.n_points = 64;
    cfg.horizon = 100.0;
    cfg.n_paths = 400;
    cfg.seed = 20240809;
    Report rep = exp_clt(cfg, 2);
    std::ostringstream d;
    d << "ks_statistic=" << rep.summary["ks_statistic"].get<double>()
      << " p_value=" << rep.summary["p_value"].get<double>() << " (soft: p>0.01)";
    // Ensemble-health problems are hard failures; a low KS p-value alone is
    // only a warning (the Gaussian limit is asymptotic).
    bool hard_ok = rep.pass;
    bool soft_ok = rep.summary["normality"].get<bool>() && hard_ok;
    emit(9, soft_ok, /*warn_only=*/hard_ok, t.secs(), d.str());
}

// 10. Reproducibility across worker counts.
void criterion_10() {
    Timer t;
    ExperimentConfig cfg;
    cfg.name = "acceptance_repro";
    cfg.n_points = 64;
    cfg.horizon = 2.0;
    cfg.n_paths = 8;
    cfg.seed = 20240810;
    namespace fs = std::filesystem;
    const std::string base = (fs::temp_directory_path() / "she_acceptance_repro").string();
    bool pass = true;
    std::string ref;
    for (int workers : {1, 2, 4}) {
        std::string dir = base + "_" + std::to_string(workers);
        write_ensemble(cfg, run_ensemble(cfg, workers), dir);
        std::string cur = slurp(dir + "/series.csv") + slurp(dir + "/manifest.json");
        if (workers == 1) ref = cur;
        else pass = pass && cur == ref;
        fs::remove_all(dir);
    }
    pass = pass && !ref.empty();
    emit(10, pass, false, t.secs(),
         "series.csv + manifest.json byte-identical for workers in {1,2,4}");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s (%d hard failure%s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
