#pragma once

#include <string>
#include <vector>

#include "she/config.hpp"
#include "she/record.hpp"
#include "she/solver.hpp"

#include <json.hpp>

namespace she {

inline constexpr const char* kCodeVersion = "1.0.0";

struct EnsembleResult {
    std::vector<RunRecord> records;
    nlohmann::json manifest;
};

PathConfig path_config_from(const ExperimentConfig& cfg);

// Runs cfg.n_paths independent paths over a worker pool. Records land in
// path-id order, so output is independent of the worker count.
EnsembleResult run_ensemble(const ExperimentConfig& cfg, int workers,
                            bool track_martingale = false);

// Paths that finished and stayed within the clamp budget.
std::vector<const RunRecord*> usable_records(const std::vector<RunRecord>& records,
                                             const ExperimentConfig& cfg,
                                             int* excluded_count = nullptr);

// manifest.json + series.csv/jsonl into dir.
void write_ensemble(const ExperimentConfig& cfg, const EnsembleResult& result,
                    const std::string& dir);

void write_summary(const std::string& dir, const nlohmann::json& summary);

nlohmann::json basic_summary(const ExperimentConfig& cfg, const EnsembleResult& result);

}  // namespace she
