// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#pragma once

#include <cstdint>
#include <cstring>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "zakcs/channel.hpp"
#include "zakcs/grid.hpp"
#include "zakcs/rng.hpp"

namespace zakcs {

/// Evenly spaced candidate grid over [0, D*Ts) x [0, V*delta_f). Column order
/// is delay-major: column = tau_index * k_nu + nu_index.
struct DictionaryConfig {
    GridConfig grid;
    int k_tau = 1;
    int k_nu = 1;

    DictionaryConfig(GridConfig g, int kt, int kn) : grid(g), k_tau(kt), k_nu(kn) {
        if (kt < 1 || kn < 1)
            throw std::invalid_argument("DictionaryConfig: grid sizes must be >= 1");
    }

    int size() const { return k_tau * k_nu; }
    double tau_step() const { return grid.delay_bins * grid.sample_period / k_tau; }
    double nu_step() const { return grid.doppler_bins * grid.doppler_spacing() / k_nu; }
    double tau_point(int i) const { return i * tau_step(); }
    double nu_point(int j) const { return j * nu_step(); }
    int column_index(int tau_idx, int nu_idx) const { return tau_idx * k_nu + nu_idx; }
    int tau_index_of(int col) const { return col / k_nu; }
    int nu_index_of(int col) const { return col % k_nu; }

    // Superresolution factors reached after n_ref halvings of a cell.
    double kappa_tau(int n_ref) const {
        return std::ldexp(static_cast<double>(k_tau), n_ref) / grid.delay_bins;
    }
    double kappa_nu(int n_ref) const {
        return std::ldexp(static_cast<double>(k_nu), n_ref) / grid.doppler_bins;
    }

    bool operator==(const DictionaryConfig& o) const {
        return grid == o.grid && k_tau == o.k_tau && k_nu == o.k_nu;
    }
};

/// Dictionary matrix Phi: column j holds Upsilon(tau_j, nu_j) * pilot.
/// Built along the dense reference route (kernel entry times pilot entry,
/// L^2 multiply-accumulates per column) so the build-cost counter measures
/// exactly what it claims.
struct AtomBank {
    DictionaryConfig dict;
    CMat columns;                 // L x K
    uint64_t pilot_key = 0;
    uint64_t build_products = 0;  // K * L^2 complex MACs performed at build time

    AtomBank(DictionaryConfig d, const DdSignal& pilot) : dict(d) {
        const GridConfig& g = d.grid;
        detail::require_length(pilot.size(), g, "AtomBank");
        const int l_n = g.symbols(), d_n = g.delay_bins, v_n = g.doppler_bins;
        const int k = d.size();
        columns.setZero(l_n, k);
        std::vector<cdouble> rowfac(static_cast<size_t>(d_n));
        for (int j = 0; j < k; ++j) {
            const double alpha = d.tau_point(d.tau_index_of(j)) / g.sample_period;
            const double beta = d.nu_point(d.nu_index_of(j)) / g.doppler_spacing();
            const auto t = detail::make_atom_tables(g, alpha, beta);
            cdouble* phi = columns.col(j).data();
            for (int vp = 0; vp < v_n; ++vp) {
                for (int dp = 0; dp < d_n; ++dp) {
                    const cdouble xl = pilot.values[g.dd_index(dp, vp)];
                    for (int dd = 0; dd < d_n; ++dd)
                        rowfac[static_cast<size_t>(dd)] =
                            t.row_phase[static_cast<size_t>(dd)] * t.delay_fac(vp, dd - dp);
                    for (int v = 0; v < v_n; ++v) {
                        const cdouble c1 =
                            t.dop[static_cast<size_t>(((v - vp) % v_n + v_n) % v_n)] * xl;
                        cdouble* out = phi + v * d_n;
                        for (int dd = 0; dd < d_n; ++dd)
                            out[dd] += rowfac[static_cast<size_t>(dd)] * c1;
                    }
                }
            }
        }
        build_products =
            static_cast<uint64_t>(k) * static_cast<uint64_t>(l_n) * static_cast<uint64_t>(l_n);
        pilot_key = bank_key(pilot, d);
    }

    static uint64_t bank_key(const DdSignal& pilot, const DictionaryConfig& d) {
        uint64_t h = 0xCBF29CE484222325ull;
        auto mix = [&h](const void* p, size_t n) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (size_t i = 0; i < n; ++i) {
                h ^= b[i];
                h *= 0x100000001B3ull;
            }
        };
        mix(pilot.values.data(), sizeof(cdouble) * static_cast<size_t>(pilot.values.size()));
        mix(&d.k_tau, sizeof d.k_tau);
        mix(&d.k_nu, sizeof d.k_nu);
        mix(&d.grid.delay_bins, sizeof d.grid.delay_bins);
        mix(&d.grid.doppler_bins, sizeof d.grid.doppler_bins);
        mix(&d.grid.sample_period, sizeof d.grid.sample_period);
        return h;
    }
};

struct BankFetch {
    std::shared_ptr<const AtomBank> bank;
    bool cache_hit = false;
};

/// LRU cache of atom banks keyed on the pilot and dictionary geometry.
/// Lookups and inserts are thread-safe; banks are built outside the lock, so
/// two workers racing on the same key may both build (identical) banks, which
/// keeps results schedule-independent.
class AtomCache {
  public:
    explicit AtomCache(size_t capacity = 8) : capacity_(capacity ? capacity : 1) {}

    static size_t capacity_from_env() {
        if (const char* s = std::getenv("ZAKCS_CACHE_CAPACITY")) {
            const long v = std::strtol(s, nullptr, 10);
            if (v >= 1) return static_cast<size_t>(v);
        }
        return 8;
    }

    BankFetch get_or_build(const DdSignal& pilot, const DictionaryConfig& dict) {
        const uint64_t key = AtomBank::bank_key(pilot, dict);
        {
            std::lock_guard lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) {
                lru_.splice(lru_.begin(), lru_, it->second.second);
                ++hits_;
                return {it->second.first, true};
            }
            ++misses_;
        }
        auto bank = std::make_shared<const AtomBank>(dict, pilot);
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) {  // lost a race; adopt the resident bank
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return {it->second.first, false};
        }
        lru_.push_front(key);
        map_.emplace(key, std::make_pair(bank, lru_.begin()));
        if (map_.size() > capacity_) {
            map_.erase(lru_.back());
            lru_.pop_back();
        }
        return {bank, false};
    }

    uint64_t hits() const {
        std::lock_guard lock(mu_);
        return hits_;
    }
    uint64_t misses() const {
        std::lock_guard lock(mu_);
        return misses_;
    }

  private:
    mutable std::mutex mu_;
    size_t capacity_;
    std::list<uint64_t> lru_;
    std::unordered_map<uint64_t,
                       std::pair<std::shared_ptr<const AtomBank>, std::list<uint64_t>::iterator>>
        map_;
    uint64_t hits_ = 0, misses_ = 0;
};

/// Cached bank construction; on a key hit no column work is repeated.
inline BankFetch build_atom_bank(const DdSignal& pilot, const DictionaryConfig& dict,
                                 AtomCache& cache) {
    return cache.get_or_build(pilot, dict);
}

}  // namespace zakcs
