#include "she/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace she {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw config_error("bad numeric value: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw config_error("bad numeric value: " + s);
    }
}

std::vector<double> to_array(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw config_error("expected [a, b, ...] array, got: " + s);
    std::vector<double> out;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item));
    }
    return out;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "name") name = unquote(v);
    else if (key == "n_points") n_points = static_cast<int>(to_double(v));
    else if (key == "dt") dt = to_double(v);
    else if (key == "horizon") horizon = to_double(v);
    else if (key == "sigma") sigma_kind = unquote(v);
    else if (key == "q") q = to_double(v);
    else if (key == "sigma_knots") sigma_knots = to_array(v);
    else if (key == "sigma_slopes") sigma_slopes = to_array(v);
    else if (key == "initial") initial_kind = unquote(v);
    else if (key == "initial_value") initial_value = to_double(v);
    else if (key == "spike_mass") spike_mass = to_double(v);
    else if (key == "spike_width") spike_width = to_double(v);
    else if (key == "initial_table") initial_table = to_array(v);
    else if (key == "paths") n_paths = static_cast<int>(to_double(v));
    else if (key == "seed") seed = static_cast<std::uint64_t>(std::llround(to_double(v)));
    else if (key == "alpha") alpha = to_double(v);
    else if (key == "beta") beta = to_double(v);
    else if (key == "scheme") scheme = unquote(v);
    else if (key == "out") output_dir = unquote(v);
    else if (key == "format") format = unquote(v);
    else if (key == "samples") n_samples = static_cast<int>(to_double(v));
    else if (key == "osc_over_t_max") osc_over_t_max = to_double(v);
    else if (key == "ratio_gap_beta") ratio_gap_beta = to_double(v);
    else if (key == "ratio_gap_c") ratio_gap_c = to_double(v);
    else if (key == "peak_n") peak_n = to_double(v);
    else if (key == "peak_gamma") peak_gamma = to_double(v);
    else if (key == "peak_k") peak_k = to_double(v);
    else if (key == "exceed_freq_max") exceed_freq_max = to_double(v);
    else if (key == "mass_exit_freq_max") mass_exit_freq_max = to_double(v);
    else if (key == "excluded_path_fraction_max") excluded_path_fraction_max = to_double(v);
    else if (key == "clamp_rate_max") clamp_rate_max = to_double(v);
    else throw config_error("unknown config key: " + key);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const config_error& e) {
            throw config_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = name;
    j["n_points"] = n_points;
    j["dt"] = dt;
    j["dt_effective"] = effective_dt();
    j["horizon"] = horizon;
    j["sigma"] = sigma_kind;
    j["q"] = q;
    j["sigma_knots"] = sigma_knots;
    j["sigma_slopes"] = sigma_slopes;
    j["initial"] = initial_kind;
    j["initial_value"] = initial_value;
    j["spike_mass"] = spike_mass;
    j["spike_width"] = spike_width;
    j["initial_table"] = initial_table;
    j["paths"] = n_paths;
    j["seed"] = seed;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["scheme"] = scheme;
    j["format"] = format;
    j["samples"] = n_samples;
    j["thresholds"] = {{"osc_over_t_max", osc_over_t_max},
                       {"ratio_gap_beta", ratio_gap_beta},
                       {"ratio_gap_c", ratio_gap_c},
                       {"peak_n", peak_n},
                       {"peak_gamma", peak_gamma},
                       {"peak_k", peak_k},
                       {"exceed_freq_max", exceed_freq_max},
                       {"mass_exit_freq_max", mass_exit_freq_max},
                       {"excluded_path_fraction_max", excluded_path_fraction_max},
                       {"clamp_rate_max", clamp_rate_max}};
    return j;
}

std::string ExperimentConfig::config_hash() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SigmaSpec ExperimentConfig::make_sigma() const {
    if (sigma_kind == "zero") return SigmaSpec::zero();
    if (sigma_kind == "linear") return SigmaSpec::linear(q);
    if (sigma_kind == "piecewise_linear") return SigmaSpec::piecewise(sigma_knots, sigma_slopes);
    throw config_error("unknown sigma kind: " + sigma_kind);
}

GridFunction ExperimentConfig::make_initial(const TorusGrid& g) const {
    if (initial_kind == "constant") {
        if (!(initial_value > 0.0)) throw config_error("initial constant must be positive");
        return GridFunction(g, initial_value);
    }
    if (initial_kind == "spike") {
        int cells = std::max(1, static_cast<int>(std::llround(spike_width / g.spacing)));
        double height = spike_mass / (cells * g.spacing);
        // Tiny positive background; observables need strict positivity.
        GridFunction f(g, height * 1e-9);
        int j0 = g.n_points / 2 - cells / 2;
        for (int k = 0; k < cells; ++k) f[(j0 + k + g.n_points) % g.n_points] = height;
        return f;
    }
    if (initial_kind == "table") {
        if (static_cast<int>(initial_table.size()) != g.n_points)
            throw config_error("initial_table size must equal n_points");
        for (double v : initial_table)
            if (!(v > 0.0)) throw config_error("initial_table values must be positive");
        return GridFunction(g, initial_table);
    }
    throw config_error("unknown initial profile: " + initial_kind);
}

double ExperimentConfig::effective_dt() const {
    if (dt > 0.0) return dt;
    return Solver::default_dt(grid(), make_sigma());
}

RenormSchedule ExperimentConfig::make_schedule() const {
    return RenormSchedule::make(alpha, beta, effective_dt(), horizon);
}

std::vector<double> ExperimentConfig::sample_times() const {
    const double h = effective_dt();
    std::vector<double> ts;
    ts.push_back(0.0);
    // Geometric from the first step up to the horizon.
    const double t0 = h;
    const int n = std::max(2, n_samples);
    const double ratio = std::pow(horizon / t0, 1.0 / (n - 1));
    double t = t0;
    for (int i = 0; i < n; ++i) {
        ts.push_back(std::min(t, horizon));
        t *= ratio;
    }
    ts.push_back(horizon);
    return ts;
}

}  // namespace she
