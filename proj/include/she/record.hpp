#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace she {

// One sampled observation of a renormalized solver state. Reconstructed
// quantities: log sup u = log_mass + log_sup, log ||u||_L1 = log_mass + log_l1.
struct Sample {
    double time = 0;
    double log_mass = 0;
    double log_sup = 0;   // of the renormalized field
    double log_l1 = 0;    // of the renormalized field
    double osc = 0;       // osc of log(field) == osc of log(u)
    double ratio = 0;     // sup/L1 of the field
    double log_center = 0;  // log field value at the cell containing x = 0
    long clamp_count = 0;
};

struct RunRecord {
    std::uint64_t path_id = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::vector<Sample> series;
    long clamp_count = 0;
    std::uint64_t total_cell_steps = 0;
    // Martingale accumulators (filled only when tracking is on).
    double mass_qv = 0.0;
    double sigma_l2_integral = 0.0;
};

}  // namespace she
