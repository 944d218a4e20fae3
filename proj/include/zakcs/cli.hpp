// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit
//
// Subcommand implementations behind the command-line front end. Exit code
// contract: 0 success, 1 validation/tolerance failure, 2 configuration or
// I/O error.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "zakcs/bench.hpp"
#include "zakcs/harness.hpp"

namespace zakcs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kCsvSchemaLine = "# schema=1";

namespace detail {

inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_snr(const nlohmann::json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Inf") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError(where + ": expected a number or \"inf\"");
}

}  // namespace detail

/// Parse a scenario from JSON. All quantities are in normalized units
/// (delays in samples, Dopplers in bins); grid.sample_period supplies the
/// physical scale and defaults to 1 second.
inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
    ScenarioConfig cfg;
    try {
        if (!j.contains("grid")) throw ConfigError("config: missing \"grid\"");
        const auto& jg = j.at("grid");
        const int d = jg.value("delay_bins", 0);
        const int v = jg.value("doppler_bins", 0);
        const double ts = jg.value("sample_period", 1.0);
        if (d < 1 || v < 1) throw ConfigError("grid: delay_bins/doppler_bins must be >= 1");
        cfg.grid = GridConfig(d, v, ts);

        cfg.paths = j.value("paths", 3);
        if (cfg.paths < 1) throw ConfigError("paths: must be >= 1");
        cfg.trials = j.value("trials", 100);
        if (cfg.trials < 1) throw ConfigError("trials: must be >= 1");
        cfg.master_seed = j.value("master_seed", uint64_t{1});
        cfg.max_iter = j.value("max_iter", std::max(1, cfg.grid.symbols() / 4));
        if (cfg.max_iter < 1) throw ConfigError("max_iter: must be >= 1");
        cfg.cache_capacity = AtomCache::capacity_from_env();

        cfg.snr_db.clear();
        if (!j.contains("snr_db")) throw ConfigError("config: missing \"snr_db\"");
        for (const auto& s : j.at("snr_db")) cfg.snr_db.push_back(detail::parse_snr(s, "snr_db"));
        if (cfg.snr_db.empty()) throw ConfigError("snr_db: must be non-empty");

        if (!j.contains("methods")) throw ConfigError("config: missing \"methods\"");
        for (const auto& jm : j.at("methods")) {
            MethodSpec m;
            const std::string type = jm.value("type", "");
            if (type == "omp")
                m.kind = MethodSpec::Kind::omp;
            else if (type == "ompbr")
                m.kind = MethodSpec::Kind::ompbr;
            else
                throw ConfigError("methods: \"type\" must be \"omp\" or \"ompbr\"");
            m.k_tau = jm.value("k_tau", cfg.grid.delay_bins);
            m.k_nu = jm.value("k_nu", cfg.grid.doppler_bins);
            m.n_ref = jm.value("n_ref", 0);
            m.label = jm.value("label", std::string{});
            if (m.k_tau < 1 || m.k_nu < 1) throw ConfigError("methods: k_tau/k_nu must be >= 1");
            if (m.n_ref < 0) throw ConfigError("methods: n_ref must be >= 0");
            cfg.methods.push_back(std::move(m));
        }
        if (cfg.methods.empty()) throw ConfigError("methods: must be non-empty");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_scenario(j);
}

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << kCsvSchemaLine << "\n";
    os << "method,snr_db,trial,nmse,nmse_db,n_paths,runtime_ns,atom_evals,cache_hit,seed\n";
    for (const auto& r : records) {
        os << r.method << ',' << detail::fmt(r.snr_db) << ',' << r.trial << ','
           << detail::fmt(r.nmse) << ',' << detail::fmt(to_db(r.nmse)) << ','
           << r.paths_estimated << ',' << r.runtime_ns << ',' << r.atom_evals << ','
           << (r.cache_hit ? 1 : 0) << ',' << r.trial_seed << "\n";
    }
}

inline void write_aggregates_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << kCsvSchemaLine << "\n";
    os << "method,snr_db,mean_nmse,mean_nmse_db,mean_paths,mean_runtime_ns,trials\n";
    for (const auto& r : rows) {
        os << r.method << ',' << detail::fmt(r.snr_db) << ',' << detail::fmt(r.mean_nmse) << ','
           << detail::fmt(r.mean_nmse_db) << ',' << detail::fmt(r.mean_paths) << ','
           << detail::fmt(r.mean_runtime_ns) << ',' << r.trials << "\n";
    }
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchStats>& stats) {
    os << kCsvSchemaLine << "\n";
    os << "method,reps,mean_iterations,phi_build_seconds,warm_phi_seconds,phi_build_products,"
          "corr_products_per_iter,cold_per_iter_seconds,warm_per_iter_seconds,cache_hit_rate,"
          "mean_nmse\n";
    for (const auto& s : stats) {
        os << s.method << ',' << s.reps << ',' << detail::fmt(s.mean_iterations) << ','
           << detail::fmt(s.phi_build_seconds) << ',' << detail::fmt(s.warm_phi_seconds) << ','
           << s.phi_build_products << ',' << s.corr_products_per_iter << ','
           << detail::fmt(s.cold_per_iter_seconds) << ',' << detail::fmt(s.warm_per_iter_seconds)
           << ',' << detail::fmt(s.cache_hit_rate) << ',' << detail::fmt(s.mean_nmse) << "\n";
    }
}

inline std::string aggregate_path_for(const std::string& out_path) {
    const std::string suffix = ".csv";
    if (out_path.size() > suffix.size() &&
        out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out_path.substr(0, out_path.size() - suffix.size()) + ".agg.csv";
    return out_path + ".agg.csv";
}

inline int cmd_simulate(const std::string& config_path, const std::string& out_path, int workers,
                        bool aggregate_flag) {
    ScenarioConfig cfg;
    try {
        cfg = load_scenario_file(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto records = run_sweep(cfg, workers);
    {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        write_trials_csv(out, records);
        if (!out) {
            std::cerr << "write failed: " << out_path << "\n";
            return 2;
        }
    }
    if (aggregate_flag) {
        const std::string agg_path = aggregate_path_for(out_path);
        std::ofstream out(agg_path);
        if (!out) {
            std::cerr << "cannot write " << agg_path << "\n";
            return 2;
        }
        write_aggregates_csv(out, aggregate(records));
        std::cout << "aggregates: " << agg_path << "\n";
    }
    std::cout << "trials written: " << records.size() << " -> " << out_path << "\n";
    return 0;
}

/// Compare the closed-form channel builder against the continuous-time
/// oracle on random channels; with integer_mode the drawn parameters are
/// rounded to the grid and the probe-assembled fast path is checked as well.
inline int cmd_validate(int d, int v, int paths, int trials, uint64_t seed, double tol,
                        bool integer_mode) {
    if (d < 1 || v < 1 || paths < 0 || trials < 1 || !(tol > 0.0)) {
        std::cerr << "validate: bad arguments\n";
        return 2;
    }
    if (d * v > 4096) {
        std::cerr << "validate: D*V must be <= 4096 (oracle cost)\n";
        return 2;
    }
    const GridConfig grid(d, v, 1.0);
    double worst = 0.0;
    int worst_trial = -1;
    PathSet worst_paths(grid);

    auto rel_error = [](const CMat& a, const CMat& ref) {
        const double rn = ref.norm();
        const double e = (a - ref).norm();
        return rn > 0.0 ? e / rn : e;
    };

    for (int t = 0; t < trials; ++t) {
        RandomStream rng(derive_trial_seed(seed, integer_mode ? "validate_int" : "validate",
                                           0.0, static_cast<uint64_t>(t)));
        PathSet set(grid);
        if (paths > 0) set = random_pathset(paths, grid, rng);
        if (integer_mode) {
            for (auto& p : set.paths) {
                const long a = std::lround(p.delay / grid.sample_period) % d;
                const long b = std::lround(p.doppler / grid.doppler_spacing()) % v;
                p.delay = static_cast<double>(a) * grid.sample_period;
                p.doppler = static_cast<double>(b) * grid.doppler_spacing();
            }
        }
        const EzcMatrix built = build_ezc(set);
        const EzcMatrix ref = oracle_ezc(set, grid);
        double err = rel_error(built.entries, ref.entries);
        if (integer_mode) {
            const EzcMatrix fast = build_ezc_integer(set);
            err = std::max(err, rel_error(fast.entries, built.entries));
            err = std::max(err, rel_error(fast.entries, ref.entries));
        }
        if (err > worst) {
            worst = err;
            worst_trial = t;
            worst_paths = set;
        }
    }
    std::cout << "validate dims=" << d << "x" << v << " paths=" << paths
              << " trials=" << trials << (integer_mode ? " integer" : "")
              << " max_rel_error=" << detail::fmt(worst) << " tol=" << detail::fmt(tol) << "\n";
    if (worst > tol) {
        std::cerr << "tolerance exceeded in trial " << worst_trial << "; paths:\n";
        for (const auto& p : worst_paths.paths)
            std::cerr << "  gain=(" << detail::fmt(p.gain.real()) << ','
                      << detail::fmt(p.gain.imag()) << ") tau/Ts="
                      << detail::fmt(p.delay / grid.sample_period)
                      << " nu/df=" << detail::fmt(p.doppler / grid.doppler_spacing()) << "\n";
        return 1;
    }
    return 0;
}

inline int cmd_bench(const std::string& config_path, const std::string& out_path) {
    ScenarioConfig cfg;
    try {
        cfg = load_scenario_file(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const double snr = cfg.snr_db.back();  // bench runs at the last listed SNR point
    const auto stats = run_bench(cfg, snr, cfg.trials);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    write_bench_csv(out, stats);
    for (const auto& s : stats) {
        std::cout << s.method << ": iters=" << detail::fmt(s.mean_iterations)
                  << " phi_build_s=" << detail::fmt(s.phi_build_seconds)
                  << " phi_products=" << s.phi_build_products
                  << " cold_per_iter_s=" << detail::fmt(s.cold_per_iter_seconds)
                  << " warm_per_iter_s=" << detail::fmt(s.warm_per_iter_seconds)
                  << " hit_rate=" << detail::fmt(s.cache_hit_rate) << "\n";
    }
    return 0;
}

}  // namespace zakcs
