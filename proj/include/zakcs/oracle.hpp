// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit
//
// Convention-free reference channel. The frame is interpolated as a finite
// Fourier series on centered bins (half-weight edges for even L), each path
// is applied literally in continuous time, and the receiver samples and
// Zak-transforms. Everything is direct summation; this module is a test
// fixture, not a production path, and stays deliberately independent of the
// closed-form kernel tables in channel.hpp.

#pragma once

#include <vector>

#include "zakcs/channel.hpp"
#include "zakcs/grid.hpp"
#include "zakcs/kernels.hpp"
#include "zakcs/zak.hpp"

namespace zakcs {

/// x_p(t): the L*Ts-periodic band-limited interpolation of a length-L sample
/// sequence, held as L Fourier coefficients on centered bins k*delta_f.
/// For even L the lowest slot k = -L/2 is evaluated with the real basis
/// cos(pi t / Ts), which is the half-weight split of the two edge bins.
struct PeriodicBandlimitedSignal {
    GridConfig grid;
    std::vector<long> bin_index;    // k for each coefficient slot
    std::vector<cdouble> coeffs;    // X_k

    explicit PeriodicBandlimitedSignal(GridConfig g) : grid(g) {}
};

/// Fit the Fourier series to time samples: X_k = (1/L) sum_n x[n] e^{-i2pi kn/L}.
inline PeriodicBandlimitedSignal periodic_interpolant(const TimeSignal& x,
                                                      const GridConfig& grid) {
    detail::require_length(x.size(), grid, "periodic_interpolant");
    const int l_n = grid.symbols();
    PeriodicBandlimitedSignal sig(grid);
    const long kmin = (l_n % 2 == 0) ? -l_n / 2 : -(l_n - 1) / 2;
    const auto roots = detail::unit_roots(l_n, -1);
    sig.bin_index.resize(static_cast<size_t>(l_n));
    sig.coeffs.resize(static_cast<size_t>(l_n));
    for (int j = 0; j < l_n; ++j) {
        const long k = kmin + j;
        cdouble acc = 0.0;
        for (int n = 0; n < l_n; ++n)
            acc += x.samples[n] * roots[static_cast<size_t>(((k * n) % l_n + l_n) % l_n)];
        sig.bin_index[static_cast<size_t>(j)] = k;
        sig.coeffs[static_cast<size_t>(j)] = acc / static_cast<double>(l_n);
    }
    return sig;
}

/// Evaluate x_p at an arbitrary time (seconds). Exact interpolation at the
/// sample instants and exactly L*Ts-periodic.
inline cdouble eval_xp(const PeriodicBandlimitedSignal& sig, double t) {
    const int l_n = sig.grid.symbols();
    const double df = sig.grid.doppler_spacing();
    const bool even = (l_n % 2 == 0);
    cdouble acc = 0.0;
    for (size_t j = 0; j < sig.coeffs.size(); ++j) {
        const long k = sig.bin_index[j];
        if (even && k == -l_n / 2)
            acc += sig.coeffs[j] * std::cos(std::numbers::pi * t / sig.grid.sample_period);
        else
            acc += sig.coeffs[j] * std::polar(1.0, 2.0 * std::numbers::pi * k * df * t);
    }
    return acc;
}

/// Noiseless receive: idzt the pilot, interpolate, apply every path in
/// continuous time, sample at n*Ts, and dzt the result.
inline DdSignal oracle_receive(const DdSignal& pilot, const PathSet& paths) {
    const GridConfig& g = paths.grid;
    detail::require_length(pilot.size(), g, "oracle_receive");
    const TimeSignal x = idzt(pilot, g);
    const PeriodicBandlimitedSignal xp = periodic_interpolant(x, g);
    const int l_n = g.symbols();
    const double ts = g.sample_period;
    TimeSignal y(CVec::Zero(l_n));
    for (const auto& p : paths.paths) {
        for (int n = 0; n < l_n; ++n) {
            const cdouble dop = std::polar(1.0, -2.0 * std::numbers::pi * p.doppler * n * ts);
            y.samples[n] += p.gain * dop * eval_xp(xp, n * ts - p.delay);
        }
    }
    return dzt(y, g);
}

/// Materialize the channel operator by probing every delay-Doppler basis
/// vector through oracle_receive. O(L) receives, each O(P L^2).
inline EzcMatrix oracle_ezc(const PathSet& paths, const GridConfig& grid) {
    EzcMatrix h(grid);
    const int l_n = grid.symbols();
    DdSignal probe(CVec::Zero(l_n));
    for (int col = 0; col < l_n; ++col) {
        probe.values.setZero();
        probe.values[col] = 1.0;
        h.entries.col(col) = oracle_receive(probe, paths).values;
    }
    return h;
}

}  // namespace zakcs
