#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "she/fields.hpp"
#include "she/sigma.hpp"
#include "she/solver.hpp"

#include <json.hpp>

namespace she {

inline constexpr int kSchemaVersion = 1;

// Declarative experiment description; maps one-to-one onto the config file
// (flat `key = value` lines). Unknown keys are errors.
struct ExperimentConfig {
    std::string name = "experiment";
    int n_points = 128;
    double dt = 0.0;  // 0 means: use the default dt policy
    double horizon = 10.0;

    std::string sigma_kind = "linear";  // zero | linear | piecewise_linear
    double q = 1.0;
    std::vector<double> sigma_knots;
    std::vector<double> sigma_slopes;

    std::string initial_kind = "constant";  // constant | spike | table
    double initial_value = 1.0;
    double spike_mass = 1.0;
    double spike_width = 1.0 / 64.0;
    std::vector<double> initial_table;

    int n_paths = 8;
    std::uint64_t seed = 1;
    double alpha = 6.0;
    double beta = 3.5;
    std::string scheme = "semi_implicit_em";
    std::string output_dir = "out";
    std::string format = "csv";  // csv | jsonl
    int n_samples = 512;         // geometric observable cadence

    // Statistical assertion thresholds. The [50,200] osc/t cap and the
    // log log gap offset are pilot-calibrated (scripts/pilot_calibrate.sh,
    // seed 424242) and frozen here; do not edit by hand.
    double osc_over_t_max = 0.05;
    double ratio_gap_beta = 4.0;
    double ratio_gap_c = -2.31;
    double peak_n = 64.0;
    double peak_gamma = 1.5;
    double peak_k = 8.0;
    double exceed_freq_max = 0.05;
    double mass_exit_freq_max = 0.05;
    double excluded_path_fraction_max = 0.01;
    double clamp_rate_max = 1e-5;

    static ExperimentConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& raw_value);

    nlohmann::json to_json() const;
    std::string config_hash() const;  // FNV-1a over the canonical JSON dump

    TorusGrid grid() const { return TorusGrid(n_points); }
    SigmaSpec make_sigma() const;
    GridFunction make_initial(const TorusGrid& g) const;
    double effective_dt() const;
    Scheme make_scheme() const { return scheme_from_name(scheme); }
    RenormSchedule make_schedule() const;
    // Geometric in t (denser early), always including 0 and the horizon.
    std::vector<double> sample_times() const;
};

}  // namespace she
