// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit
//
// Monte Carlo experiment runner. Every trial is a pure function of
// (master_seed, method id, SNR point, trial index), so sweep output is
// schedule- and worker-count-independent; wall-clock fields are the only
// nondeterministic columns.

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "zakcs/estimators.hpp"
#include "zakcs/oracle.hpp"

namespace zakcs {

/// Exact operator-domain error: ||H - sum_j a_j Upsilon(tau_j, nu_j)||_F^2 / ||H||_F^2.
inline double nmse(const EzcMatrix& truth, const SparseEstimate& est, const GridConfig& grid) {
    const double denom = truth.entries.squaredNorm();
    if (!(denom > 0.0)) throw std::invalid_argument("nmse: zero true channel");
    PathSet hat(grid);
    hat.paths.reserve(est.entries.size());
    for (const auto& e : est.entries) hat.paths.push_back(Path{e.gain, e.tau, e.nu});
    const EzcMatrix built = build_ezc(hat);
    return (truth.entries - built.entries).squaredNorm() / denom;
}

inline double to_db(double linear) {
    return 10.0 * std::log10(std::max(linear, 1e-300));
}

struct MethodSpec {
    enum class Kind { omp, ompbr };
    Kind kind = Kind::omp;
    int k_tau = 1;
    int k_nu = 1;
    int n_ref = 0;
    std::string label;  // optional; the canonical id feeds the seed derivation

    std::string id() const {
        if (!label.empty()) return label;
        std::string s = (kind == Kind::omp) ? "omp" : "ompbr";
        s += "_kt" + std::to_string(k_tau) + "_kn" + std::to_string(k_nu);
        if (kind == Kind::ompbr) s += "_nref" + std::to_string(n_ref);
        return s;
    }
};

struct ScenarioConfig {
    GridConfig grid{16, 16, 1.0};
    int paths = 3;
    std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
    int trials = 100;
    std::vector<MethodSpec> methods;
    uint64_t master_seed = 1;
    int max_iter = 64;
    size_t cache_capacity = 8;
};

struct TrialRecord {
    std::string method;
    double snr_db = 0.0;
    int trial = 0;
    double nmse = 0.0;
    int paths_estimated = 0;
    int64_t runtime_ns = 0;
    uint64_t atom_evals = 0;
    bool cache_hit = false;
    uint64_t trial_seed = 0;
    // extra diagnostics, not part of the CSV schema
    uint64_t corr_products = 0;
    uint64_t bank_build_products = 0;
    bool degenerate = false;
};

/// Dispatch one estimate; the atom bank flows through the shared cache.
inline SparseEstimate run_estimator(const MethodSpec& m, const GridConfig& grid,
                                    const DdSignal& y, const DdSignal& pilot,
                                    const StoppingRule& stop, AtomCache& cache) {
    const DictionaryConfig dict(grid, m.k_tau, m.k_nu);
    if (m.kind == MethodSpec::Kind::omp) {
        const BankFetch fetch = build_atom_bank(pilot, dict, cache);
        SparseEstimate est = omp(y, *fetch.bank, stop);
        est.counters.cache_hit = fetch.cache_hit;
        est.counters.bank_build_products = fetch.cache_hit ? 0 : fetch.bank->build_products;
        return est;
    }
    return ompbr(y, pilot, grid, dict, m.n_ref, stop, cache);
}

/// One seeded trial: draw channel and pilot, set sigma^2 from the realized
/// received energy and the SNR point, apply noise, estimate with xi = L sigma^2,
/// score the operator NMSE. The noiseless sentinel (snr_db = +inf) replaces
/// xi with a 1e-12 relative-residual floor.
inline TrialRecord run_trial(const ScenarioConfig& cfg, const MethodSpec& method, double snr_db,
                             int trial_index, AtomCache& cache) {
    const GridConfig& grid = cfg.grid;
    const int l_n = grid.symbols();
    TrialRecord rec;
    rec.method = method.id();
    rec.snr_db = snr_db;
    rec.trial = trial_index;
    rec.trial_seed = derive_trial_seed(cfg.master_seed, rec.method, snr_db,
                                       static_cast<uint64_t>(trial_index));

    RandomStream rng(rec.trial_seed);
    const PathSet paths = random_pathset(cfg.paths, grid, rng);
    const DdSignal pilot = random_pilot(grid, rng);
    const EzcMatrix h = build_ezc(paths);

    double sigma2 = 0.0;
    if (!std::isinf(snr_db)) {
        const double signal_energy = (h.entries * pilot.values).squaredNorm();
        sigma2 = signal_energy / (l_n * std::pow(10.0, snr_db / 10.0));
    }
    const DdSignal y = apply_channel(h, pilot, NoiseSpec(sigma2), rng);
    const double xi =
        (sigma2 > 0.0) ? l_n * sigma2 : 1e-12 * y.values.squaredNorm();
    const StoppingRule stop(xi, cfg.max_iter);

    const auto t0 = std::chrono::steady_clock::now();
    const SparseEstimate est = run_estimator(method, grid, y, pilot, stop, cache);
    const auto t1 = std::chrono::steady_clock::now();

    rec.nmse = nmse(h, est, grid);
    rec.paths_estimated = est.iterations;
    rec.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    rec.atom_evals = est.counters.atom_evals;
    rec.cache_hit = est.counters.cache_hit;
    rec.corr_products = est.counters.corr_products;
    rec.bank_build_products = est.counters.bank_build_products;
    rec.degenerate = est.degenerate;
    return rec;
}

/// methods x snr points x trials, in deterministic record order. Workers only
/// change scheduling, never numbers.
inline std::vector<TrialRecord> run_sweep(const ScenarioConfig& cfg, int workers = 1) {
    struct Task {
        size_t method;
        size_t snr;
        int trial;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.methods.size() * cfg.snr_db.size() * static_cast<size_t>(cfg.trials));
    for (size_t m = 0; m < cfg.methods.size(); ++m)
        for (size_t s = 0; s < cfg.snr_db.size(); ++s)
            for (int t = 0; t < cfg.trials; ++t) tasks.push_back({m, s, t});

    std::vector<TrialRecord> records(tasks.size());
    AtomCache cache(cfg.cache_capacity);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& tk = tasks[i];
            records[i] =
                run_trial(cfg, cfg.methods[tk.method], cfg.snr_db[tk.snr], tk.trial, cache);
        }
    };
    const int n = std::max(1, workers);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

struct AggregateRow {
    std::string method;
    double snr_db = 0.0;
    double mean_nmse = 0.0;     // mean of linear NMSE
    double mean_nmse_db = 0.0;  // that mean, in dB
    double mean_paths = 0.0;
    double mean_runtime_ns = 0.0;
    int trials = 0;
};

/// Per-(method, snr) means in first-appearance order.
inline std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    std::vector<AggregateRow> rows;
    auto find_row = [&rows](const std::string& m, double snr) -> AggregateRow& {
        for (auto& r : rows)
            if (r.method == m && (r.snr_db == snr || (std::isinf(r.snr_db) && std::isinf(snr))))
                return r;
        rows.push_back({m, snr, 0, 0, 0, 0, 0});
        return rows.back();
    };
    for (const auto& rec : records) {
        AggregateRow& row = find_row(rec.method, rec.snr_db);
        row.mean_nmse += rec.nmse;
        row.mean_paths += rec.paths_estimated;
        row.mean_runtime_ns += static_cast<double>(rec.runtime_ns);
        row.trials += 1;
    }
    for (auto& row : rows) {
        row.mean_nmse /= row.trials;
        row.mean_paths /= row.trials;
        row.mean_runtime_ns /= row.trials;
        row.mean_nmse_db = to_db(row.mean_nmse);
    }
    return rows;
}

}  // namespace zakcs
