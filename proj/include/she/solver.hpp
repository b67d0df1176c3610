#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "she/fields.hpp"
#include "she/noise.hpp"
#include "she/record.hpp"
#include "she/sigma.hpp"
#include "she/tridiag.hpp"

namespace she {

enum class Scheme { semi_implicit_em, split_step_geometric };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Renormalization epochs t_1=1, t_2=2, t_{k+1}=t_k+(log k)^-alpha, snapped to
// the step grid. Once the gap drops below dt every step is an epoch
// (dense_from_step); enumeration stops there.
struct RenormSchedule {
    double alpha = 6.0;
    double beta = 3.5;
    std::vector<double> epoch_times;           // unsnapped, kept for the manifest
    std::vector<std::uint64_t> epoch_steps;    // snapped, strictly increasing
    std::uint64_t dense_from_step = UINT64_MAX;

    static RenormSchedule make(double alpha, double beta, double dt, double horizon);
    static RenormSchedule none();  // no epochs (band trigger may still fire)
};

// Renormalized representation of u: u(t,.) = exp(log_mass) * field.
struct SolverState {
    GridFunction field;
    double time = 0.0;
    std::uint64_t step_index = 0;
    double log_mass = 0.0;
    long clamp_count = 0;
    SigmaSpec sigma_eff;  // base sigma rescaled by the accumulated mass

    // Martingale tracking accumulators (valid while exp(log_mass) is representable).
    double mass_qv = 0.0;
    double sigma_l2_integral = 0.0;

    explicit SolverState(GridFunction u0) : field(std::move(u0)) {}
};

// field /= ||field||_L1, log_mass ledger updated, sigma_eff rescaled.
// Observables of the reconstructed u are unchanged by construction.
void renormalize(SolverState& state);

class Solver {
  public:
    Solver(TorusGrid grid, double dt, Scheme scheme, SigmaSpec sigma);

    SolverState initial_state(const GridFunction& u0) const;

    // One timestep using the noise row at state.step_index.
    void step(SolverState& state, const NoiseStream& noise);

    double dt() const { return dt_; }
    Scheme scheme() const { return scheme_; }
    const TorusGrid& grid() const { return grid_; }

    void set_track_martingale(bool on) { track_martingale_ = on; }

    // dt <= min(dx^2/4, dx/(10*Lip(sigma)^2)); keeps the per-step noise
    // multiplier variance small.
    static double default_dt(const TorusGrid& grid, const SigmaSpec& sigma);

  private:
    TorusGrid grid_;
    double dt_;
    Scheme scheme_;
    SigmaSpec sigma_;
    PeriodicTridiag diffuse_;
    bool track_martingale_ = false;
    std::vector<double> noise_buf_;
    std::vector<double> rhs_;
};

struct PathConfig {
    TorusGrid grid;
    double dt;
    double horizon;
    Scheme scheme = Scheme::semi_implicit_em;
    SigmaSpec sigma;
    RenormSchedule schedule = RenormSchedule::none();
    bool renorm_band = true;  // renormalize whenever ||field||_L1 leaves [1/2, 2]
    bool track_martingale = false;
    std::vector<double> sample_times;  // sorted, within [0, horizon]
};

// Steps to horizon, renormalizing per schedule/band, sampling observables.
// Path-fatal errors are recorded in the returned record, not thrown.
RunRecord run_path(const PathConfig& cfg, const GridFunction& u0, const NoiseStream& noise);

struct CoupledReport {
    double max_violation = 0.0;  // max over time and space of (low - high)
    double tolerance = 0.0;
    bool pass = false;
};

// Pathwise comparison: both solutions on the identical noise.
CoupledReport coupled_pair(const PathConfig& cfg, const GridFunction& u0_low,
                           const GridFunction& u0_high, const NoiseStream& noise,
                           double tolerance = 1e-8);

struct SubadditivityReport {
    double log_S_s = 0.0;        // log sup u(s), first solution from u0 = 1
    double log_S_t_shift = 0.0;  // log sup of the unit-start solution on shifted noise
    double log_S_st = 0.0;       // log sup u(s+t)
    double slack = 0.0;
    bool pass = false;
};

// Checks log S_{s+t} <= log S_s + log(S_t o theta_s) + slack with linear sigma
// and u0 = 1; s, t snapped to the step grid.
SubadditivityReport subadditivity_check(const PathConfig& cfg, const NoiseStream& noise,
                                        double s, double t);

}  // namespace she
