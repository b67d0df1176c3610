#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "she/experiments.hpp"
#include "she/harness.hpp"

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    int paths = 0;
    int workers = 1;
    bool seed_set = false, paths_set = false;
};

she::ExperimentConfig load_config(const GlobalOpts& g) {
    she::ExperimentConfig cfg;
    if (!g.config_path.empty()) cfg = she::ExperimentConfig::from_file(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (g.paths_set) cfg.n_paths = g.paths;
    if (!g.out.empty()) cfg.output_dir = g.out;
    if (!g.format.empty()) cfg.format = g.format;
    return cfg;
}

int finish(const she::ExperimentConfig& cfg, const she::Report& rep) {
    she::write_summary(cfg.output_dir, rep.summary);
    std::cout << rep.summary.dump(2) << "\n";
    if (rep.warning) std::cout << "[warn] " << rep.summary.value("note", "") << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int run_with_ensemble_outputs(const she::ExperimentConfig& cfg, int workers,
                              const std::function<she::Report(const she::EnsembleResult&)>& fn) {
    she::EnsembleResult ens = she::run_ensemble(cfg, workers);
    she::write_ensemble(cfg, ens, cfg.output_dir);
    she::Report rep = fn(ens);
    return finish(cfg, rep);
}

// Renders a summary from stored row-level records.
int cmd_report(const std::string& dir) {
    std::ifstream in(dir + "/series.csv");
    if (!in) throw she::config_error("report: cannot open " + dir + "/series.csv");
    std::string line;
    std::getline(in, line);  // header
    std::map<std::uint64_t, std::vector<std::array<double, 3>>> by_path;  // t, log_mass, log_sup
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() < 9) continue;
        by_path[static_cast<std::uint64_t>(row[0])].push_back({row[1], row[2], row[3]});
    }
    nlohmann::json j;
    j["schema_version"] = she::kSchemaVersion;
    j["paths"] = by_path.size();
    std::vector<double> finals;
    for (auto& [p, rows] : by_path) finals.push_back(rows.back()[1] + rows.back()[2]);
    if (!finals.empty()) {
        j["final_log_sup_mean"] = she::mean(finals);
        if (finals.size() > 1) j["final_log_sup_stddev"] = she::sample_stddev(finals);
        j["final_time"] = by_path.begin()->second.back()[0];
    }
    she::write_summary(dir, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the stochastic heat equation on the torus"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "experiment config file (key = value lines)");
    auto* seed_opt = app.add_option("--seed", g.seed, "override the config seed");
    auto* paths_opt = app.add_option("--paths", g.paths, "override the path count");
    app.add_option("--out", g.out, "output directory override");
    app.add_option("--workers", g.workers, "worker thread count");
    app.add_option("--format", g.format, "series format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl", ""}));

    app.add_subcommand("kernel-check", "heat kernel property and lemma suites");
    app.add_subcommand("simulate", "single path, full series dump");
    app.add_subcommand("ensemble", "parallel paths plus summary");
    app.add_subcommand("lambda", "Lyapunov exponent vs closed-form quadrature");
    app.add_subcommand("osc", "oscillation-of-log scaling statistics");
    app.add_subcommand("ratio", "sup/L1 interpolation gap statistics");
    app.add_subcommand("peaks", "tall-peak taming frequencies from a spike start");
    app.add_subcommand("valleys", "mass-exit frequencies from a spike start");
    app.add_subcommand("clt", "Gaussian-limit KS diagnostic");
    app.add_subcommand("report", "render summaries from stored records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    g.seed_set = seed_opt->count() > 0;
    g.paths_set = paths_opt->count() > 0;

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        she::ExperimentConfig cfg = load_config(g);

        if (sub == "kernel-check") {
            she::Report rep = she::kernel_check();
            std::cout << rep.summary.dump(2) << "\n"
                      << (rep.pass ? "PASS" : "FAIL") << "\n";
            if (!g.out.empty()) she::write_summary(g.out, rep.summary);
            return rep.pass ? 0 : 1;
        }
        if (sub == "report") {
            if (g.out.empty()) throw she::config_error("report: --out <dir> required");
            return cmd_report(g.out);
        }
        if (sub == "simulate") {
            cfg.n_paths = 1;
            she::EnsembleResult ens = she::run_ensemble(cfg, 1);
            she::write_ensemble(cfg, ens, cfg.output_dir);
            she::write_summary(cfg.output_dir, she::basic_summary(cfg, ens));
            std::cout << "wrote " << cfg.output_dir << "\n";
            return ens.records.front().ok ? 0 : 1;
        }
        if (sub == "ensemble") {
            she::EnsembleResult ens = she::run_ensemble(cfg, g.workers);
            she::write_ensemble(cfg, ens, cfg.output_dir);
            nlohmann::json sum = she::basic_summary(cfg, ens);
            she::write_summary(cfg.output_dir, sum);
            std::cout << sum.dump(2) << "\n";
            int excluded = 0;
            she::usable_records(ens.records, cfg, &excluded);
            return excluded <= cfg.excluded_path_fraction_max * cfg.n_paths ? 0 : 1;
        }
        if (sub == "lambda")
            return run_with_ensemble_outputs(cfg, g.workers, [&](const she::EnsembleResult& e) {
                return she::exp_lambda_vs_formula(cfg, g.workers, &e);
            });
        if (sub == "osc")
            return run_with_ensemble_outputs(cfg, g.workers, [&](const she::EnsembleResult& e) {
                return she::exp_oscillation_scaling(cfg, e);
            });
        if (sub == "ratio")
            return run_with_ensemble_outputs(cfg, g.workers, [&](const she::EnsembleResult& e) {
                return she::exp_ratio_interpolation(cfg, e);
            });
        if (sub == "peaks") return finish(cfg, she::exp_peak_taming(cfg, g.workers));
        if (sub == "valleys") return finish(cfg, she::exp_mass_valleys(cfg, g.workers));
        if (sub == "clt") return finish(cfg, she::exp_clt(cfg, g.workers));
        throw she::config_error("unhandled subcommand: " + sub);
    } catch (const she::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
