#include "she/harness.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "she/noise.hpp"

namespace she {

PathConfig path_config_from(const ExperimentConfig& cfg) {
    PathConfig pc{.grid = cfg.grid(),
                  .dt = cfg.effective_dt(),
                  .horizon = cfg.horizon,
                  .scheme = cfg.make_scheme(),
                  .sigma = cfg.make_sigma(),
                  .schedule = cfg.make_schedule(),
                  .renorm_band = true,
                  .track_martingale = false,
                  .sample_times = cfg.sample_times()};
    return pc;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg, int workers, bool track_martingale) {
    if (workers < 1) workers = 1;
    EnsembleResult out;
    const TorusGrid g = cfg.grid();
    const GridFunction u0 = cfg.make_initial(g);
    PathConfig pc = path_config_from(cfg);
    pc.track_martingale = track_martingale;
    out.records.resize(static_cast<size_t>(cfg.n_paths));

    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= cfg.n_paths) break;
            NoiseStream noise(cfg.seed, static_cast<std::uint64_t>(i), g, pc.dt);
            out.records[static_cast<size_t>(i)] = run_path(pc, u0, noise);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    out.manifest["schema_version"] = kSchemaVersion;
    out.manifest["config"] = cfg.to_json();
    out.manifest["config_hash"] = cfg.config_hash();
    out.manifest["generator_version"] = kNoiseGeneratorVersion;
    out.manifest["code_version"] = kCodeVersion;
    return out;
}

std::vector<const RunRecord*> usable_records(const std::vector<RunRecord>& records,
                                             const ExperimentConfig& cfg, int* excluded_count) {
    std::vector<const RunRecord*> ok;
    int excluded = 0;
    for (const auto& r : records) {
        bool good = r.ok;
        if (good && r.total_cell_steps > 0) {
            double rate = static_cast<double>(r.clamp_count) /
                          static_cast<double>(r.total_cell_steps);
            if (rate > cfg.clamp_rate_max) good = false;
        }
        if (good) ok.push_back(&r);
        else ++excluded;
    }
    if (excluded_count) *excluded_count = excluded;
    return ok;
}

namespace {

void write_series_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fputs("path,time,log_mass,log_sup,log_l1,osc,ratio,log_center,clamp_count\n", f);
    for (const auto& r : records)
        for (const auto& s : r.series)
            std::fprintf(f, "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%ld\n",
                         static_cast<unsigned long long>(r.path_id), s.time, s.log_mass,
                         s.log_sup, s.log_l1, s.osc, s.ratio, s.log_center, s.clamp_count);
    std::fclose(f);
}

void write_series_jsonl(const std::string& path, const std::vector<RunRecord>& records) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    for (const auto& r : records)
        for (const auto& s : r.series)
            std::fprintf(f,
                         "{\"path\":%llu,\"time\":%.17g,\"log_mass\":%.17g,\"log_sup\":%.17g,"
                         "\"log_l1\":%.17g,\"osc\":%.17g,\"ratio\":%.17g,\"log_center\":%.17g,"
                         "\"clamp_count\":%ld}\n",
                         static_cast<unsigned long long>(r.path_id), s.time, s.log_mass,
                         s.log_sup, s.log_l1, s.osc, s.ratio, s.log_center, s.clamp_count);
    std::fclose(f);
}

}  // namespace

void write_ensemble(const ExperimentConfig& cfg, const EnsembleResult& result,
                    const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream m(dir + "/manifest.json");
        m << result.manifest.dump(2) << "\n";
    }
    if (cfg.format == "jsonl")
        write_series_jsonl(dir + "/series.jsonl", result.records);
    else if (cfg.format == "csv")
        write_series_csv(dir + "/series.csv", result.records);
    else
        throw config_error("unknown output format: " + cfg.format);
}

void write_summary(const std::string& dir, const nlohmann::json& summary) {
    std::filesystem::create_directories(dir);
    std::ofstream s(dir + "/summary.json");
    s << summary.dump(2) << "\n";
}

nlohmann::json basic_summary(const ExperimentConfig& cfg, const EnsembleResult& result) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = cfg.name;
    j["config_hash"] = cfg.config_hash();
    int excluded = 0;
    auto ok = usable_records(result.records, cfg, &excluded);
    j["paths"] = result.records.size();
    j["paths_excluded"] = excluded;
    long clamps = 0;
    std::uint64_t cells = 0;
    for (const auto& r : result.records) {
        clamps += r.clamp_count;
        cells += r.total_cell_steps;
    }
    j["clamp_count"] = clamps;
    j["clamp_rate"] = cells ? static_cast<double>(clamps) / static_cast<double>(cells) : 0.0;
    return j;
}

}  // namespace she
