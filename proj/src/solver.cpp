#include "she/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace she {

const char* scheme_name(Scheme s) {
    return s == Scheme::semi_implicit_em ? "semi_implicit_em" : "split_step_geometric";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "semi_implicit_em") return Scheme::semi_implicit_em;
    if (name == "split_step_geometric") return Scheme::split_step_geometric;
    throw config_error("unknown scheme: " + name);
}

RenormSchedule RenormSchedule::make(double alpha, double beta, double dt, double horizon) {
    if (!(beta > 3.0)) throw config_error("RenormSchedule: beta must be > 3");
    if (!(alpha > 5.0) || !(alpha > 4.0 * beta / 3.0 + 1.0))
        throw config_error("RenormSchedule: need alpha > max(5, 4*beta/3 + 1)");
    RenormSchedule s;
    s.alpha = alpha;
    s.beta = beta;
    auto snap = [&](double t) {
        auto step = static_cast<std::uint64_t>(std::llround(t / dt));
        if (s.epoch_steps.empty() || step > s.epoch_steps.back()) s.epoch_steps.push_back(step);
    };
    double t = 1.0;
    if (t <= horizon) {
        s.epoch_times.push_back(t);
        snap(t);
    }
    t = 2.0;
    if (t <= horizon) {
        s.epoch_times.push_back(t);
        snap(t);
    }
    for (long k = 2; t <= horizon; ++k) {
        double gap = std::pow(std::log(static_cast<double>(k)), -alpha);
        if (gap < dt) {
            // Epoch gaps are below the step size from here on: every step is
            // an epoch and enumeration would be pointless.
            s.dense_from_step = static_cast<std::uint64_t>(std::llround(t / dt));
            break;
        }
        t += gap;
        if (t > horizon) break;
        s.epoch_times.push_back(t);
        snap(t);
    }
    return s;
}

RenormSchedule RenormSchedule::none() {
    RenormSchedule s;
    return s;
}

void renormalize(SolverState& state) {
    double m = norm_l1(state.field);
    if (!(m > 0.0)) throw degenerate_field("renormalize: non-positive mass");
    const double inv = 1.0 / m;
    for (double& v : state.field.values) v *= inv;
    state.log_mass += std::log(m);
    state.sigma_eff = rescale_sigma(state.sigma_eff, m);
}

Solver::Solver(TorusGrid grid, double dt, Scheme scheme, SigmaSpec sigma)
    : grid_(grid),
      dt_(dt),
      scheme_(scheme),
      sigma_(std::move(sigma)),
      diffuse_(grid.n_points, dt / (grid.spacing * grid.spacing)),
      noise_buf_(static_cast<size_t>(grid.n_points)),
      rhs_(static_cast<size_t>(grid.n_points)) {
    if (!(dt > 0.0)) throw config_error("Solver: dt must be positive");
    if (scheme_ == Scheme::split_step_geometric && !sigma_.is_linear())
        throw config_error("split_step_geometric requires linear (or zero) sigma");
}

SolverState Solver::initial_state(const GridFunction& u0) const {
    if (!(u0.grid == grid_)) throw config_error("initial_state: grid mismatch");
    SolverState s(u0);
    s.sigma_eff = sigma_;
    return s;
}

double Solver::default_dt(const TorusGrid& grid, const SigmaSpec& sigma) {
    const double dx = grid.spacing;
    double dt = dx * dx / 4.0;
    const double lip = sigma.lipschitz_constant;
    if (lip > 0.0) dt = std::min(dt, dx / (10.0 * lip * lip));
    return dt;
}

void Solver::step(SolverState& state, const NoiseStream& noise) {
    if (noise.dt() != dt_) throw config_error("Solver::step: stream dt mismatch");
    const int n = grid_.n_points;
    const double dx = grid_.spacing;
    const double inv_dx = 1.0 / dx;
    double* v = state.field.values.data();
    double* w = noise_buf_.data();
    double* rhs = rhs_.data();

    double sum_before = 0.0;
    double sig2 = 0.0;
    if (track_martingale_) {
        for (int j = 0; j < n; ++j) {
            sum_before += v[j];
            double sv = state.sigma_eff(v[j]);
            sig2 += sv * sv;
        }
    }

    noise.fill_increments(state.step_index, w);

    if (scheme_ == Scheme::semi_implicit_em) {
        const SigmaSpec& sig = state.sigma_eff;
        switch (sig.kind) {
            case SigmaSpec::Kind::zero:
                for (int j = 0; j < n; ++j) rhs[j] = v[j];
                break;
            case SigmaSpec::Kind::linear: {
                const double q = sig.q;
                for (int j = 0; j < n; ++j) rhs[j] = v[j] * (1.0 + q * w[j] * inv_dx);
                break;
            }
            case SigmaSpec::Kind::piecewise_linear:
                for (int j = 0; j < n; ++j) rhs[j] = v[j] + sig(v[j]) * w[j] * inv_dx;
                break;
        }
        diffuse_.solve(rhs, v);
        // sigma(0)=0 means the continuum solution cannot cross zero; clamps
        // mark discretization error and are counted, at a scale-aware floor.
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += v[j];
        mean /= n;
        const double floor = 1e-12 * mean;
        for (int j = 0; j < n; ++j) {
            if (v[j] < floor) {
                v[j] = floor;
                ++state.clamp_count;
            }
        }
    } else {
        diffuse_.solve(v, v);
        const double q = sigma_.q;
        const double drift = -0.5 * q * q * dt_ * inv_dx;
        for (int j = 0; j < n; ++j) v[j] *= std::exp(q * w[j] * inv_dx + drift);
    }

    if (track_martingale_) {
        double sum_after = 0.0;
        for (int j = 0; j < n; ++j) sum_after += v[j];
        const double scale = std::exp(state.log_mass);
        const double dm = scale * dx * (sum_after - sum_before);
        state.mass_qv += dm * dm;
        state.sigma_l2_integral += scale * scale * sig2 * dx * dt_;
    }

    ++state.step_index;
    state.time = static_cast<double>(state.step_index) * dt_;
}

namespace {

Sample observe(const SolverState& st) {
    Sample s;
    s.time = st.time;
    s.log_mass = st.log_mass;
    s.log_sup = std::log(norm_sup(st.field));
    s.log_l1 = std::log(norm_l1(st.field));
    s.osc = osc_log(st.field);
    s.ratio = ratio_sup_l1(st.field);
    s.log_center = std::log(st.field[st.field.grid.n_points / 2]);
    s.clamp_count = st.clamp_count;
    return s;
}

std::vector<std::uint64_t> snap_times(const std::vector<double>& times, double dt,
                                      std::uint64_t n_steps) {
    std::vector<std::uint64_t> out;
    for (double t : times) {
        auto s = static_cast<std::uint64_t>(std::llround(t / dt));
        if (s > n_steps) s = n_steps;
        if (out.empty() || s > out.back()) out.push_back(s);
    }
    return out;
}

}  // namespace

RunRecord run_path(const PathConfig& cfg, const GridFunction& u0, const NoiseStream& noise) {
    RunRecord rec;
    rec.path_id = noise.path_id();
    rec.seed = noise.seed();
    const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.horizon / cfg.dt));
    try {
        Solver solver(cfg.grid, cfg.dt, cfg.scheme, cfg.sigma);
        solver.set_track_martingale(cfg.track_martingale);
        SolverState st = solver.initial_state(u0);
        const auto samples = snap_times(cfg.sample_times, cfg.dt, n_steps);
        std::size_t si = 0, ei = 0;
        const auto& epochs = cfg.schedule.epoch_steps;
        const double dx = cfg.grid.spacing;
        auto maybe_sample = [&] {
            while (si < samples.size() && samples[si] == st.step_index) {
                rec.series.push_back(observe(st));
                ++si;
            }
        };
        maybe_sample();
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            solver.step(st, noise);
            bool epoch = st.step_index >= cfg.schedule.dense_from_step;
            if (!epoch) {
                while (ei < epochs.size() && epochs[ei] < st.step_index) ++ei;
                if (ei < epochs.size() && epochs[ei] == st.step_index) {
                    epoch = true;
                    ++ei;
                }
            }
            bool renorm = epoch;
            if (!renorm && cfg.renorm_band) {
                double s = 0.0;
                for (double v : st.field.values) s += std::fabs(v);
                const double l1 = dx * s;
                renorm = l1 < 0.5 || l1 > 2.0;
            }
            if (renorm) renormalize(st);
            maybe_sample();
        }
        rec.clamp_count = st.clamp_count;
        rec.total_cell_steps = n_steps * static_cast<std::uint64_t>(cfg.grid.n_points);
        rec.mass_qv = st.mass_qv;
        rec.sigma_l2_integral = st.sigma_l2_integral;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

CoupledReport coupled_pair(const PathConfig& cfg, const GridFunction& u0_low,
                           const GridFunction& u0_high, const NoiseStream& noise,
                           double tolerance) {
    const int n = cfg.grid.n_points;
    for (int j = 0; j < n; ++j) {
        if (!(u0_low[j] > 0.0) || !(u0_high[j] > 0.0))
            throw std::domain_error("coupled_pair: initial data must be positive");
        if (u0_low[j] > u0_high[j])
            throw std::domain_error("coupled_pair: u0_low must be <= u0_high pointwise");
    }
    Solver solver(cfg.grid, cfg.dt, cfg.scheme, cfg.sigma);
    SolverState lo = solver.initial_state(u0_low);
    SolverState hi = solver.initial_state(u0_high);
    const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.horizon / cfg.dt));
    CoupledReport rep;
    rep.tolerance = tolerance;
    // Direct (unrenormalized) representation; fine at comparison horizons.
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        solver.step(lo, noise);
        solver.step(hi, noise);
        for (int j = 0; j < n; ++j)
            rep.max_violation = std::max(rep.max_violation, lo.field[j] - hi.field[j]);
    }
    rep.pass = rep.max_violation <= tolerance;
    return rep;
}

SubadditivityReport subadditivity_check(const PathConfig& cfg, const NoiseStream& noise,
                                        double s, double t) {
    if (!cfg.sigma.is_linear())
        throw config_error("subadditivity_check: linear sigma required");
    const auto s_steps = static_cast<std::uint64_t>(std::llround(s / cfg.dt));
    const auto t_steps = static_cast<std::uint64_t>(std::llround(t / cfg.dt));
    Solver solver(cfg.grid, cfg.dt, cfg.scheme, cfg.sigma);
    const GridFunction one(cfg.grid, 1.0);
    const double dx = cfg.grid.spacing;

    auto run = [&](SolverState& st, const NoiseStream& ns, std::uint64_t steps) {
        for (std::uint64_t k = 0; k < steps; ++k) {
            solver.step(st, ns);
            double acc = 0.0;
            for (double v : st.field.values) acc += std::fabs(v);
            const double l1 = dx * acc;
            if (l1 < 0.5 || l1 > 2.0) renormalize(st);
        }
    };

    SolverState st1 = solver.initial_state(one);
    run(st1, noise, s_steps);
    SubadditivityReport rep;
    rep.log_S_s = st1.log_mass + std::log(norm_sup(st1.field));
    run(st1, noise, t_steps);
    rep.log_S_st = st1.log_mass + std::log(norm_sup(st1.field));

    SolverState st2 = solver.initial_state(one);
    run(st2, noise.shifted(static_cast<std::int64_t>(s_steps)), t_steps);
    rep.log_S_t_shift = st2.log_mass + std::log(norm_sup(st2.field));

    rep.slack = 1e-8 * (1.0 + std::fabs(rep.log_S_st));
    rep.pass = rep.log_S_st <= rep.log_S_s + rep.log_S_t_shift + rep.slack;
    return rep;
}

}  // namespace she
