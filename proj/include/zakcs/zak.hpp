// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#pragma once

#include <numbers>
#include <vector>

#include "zakcs/grid.hpp"

namespace zakcs {

namespace detail {

// V-th roots of unity, sign < 0 for exp(-i 2 pi j / V).
inline std::vector<cdouble> unit_roots(int v, int sign) {
    std::vector<cdouble> w(static_cast<size_t>(v));
    for (int j = 0; j < v; ++j)
        w[static_cast<size_t>(j)] =
            std::polar(1.0, sign * 2.0 * std::numbers::pi * j / static_cast<double>(v));
    return w;
}

// Z[d, v] = sum_u x[d + u*D] exp(-i 2 pi u v / V)
inline void dzt_into(const CVec& x, const GridConfig& g, CVec& z) {
    const int d_n = g.delay_bins, v_n = g.doppler_bins;
    const auto w = unit_roots(v_n, -1);
    z.resize(g.symbols());
    for (int d = 0; d < d_n; ++d) {
        for (int v = 0; v < v_n; ++v) {
            cdouble acc = 0.0;
            for (int u = 0; u < v_n; ++u)
                acc += x[d + u * d_n] * w[static_cast<size_t>((u * v) % v_n)];
            z[g.dd_index(d, v)] = acc;
        }
    }
}

// x[d + u*D] = (1/V) sum_v Z[d, v] exp(+i 2 pi u v / V); exact inverse of dzt_into
inline void idzt_into(const CVec& z, const GridConfig& g, CVec& x) {
    const int d_n = g.delay_bins, v_n = g.doppler_bins;
    const auto w = unit_roots(v_n, +1);
    const double scale = 1.0 / static_cast<double>(v_n);
    x.resize(g.symbols());
    for (int d = 0; d < d_n; ++d) {
        for (int u = 0; u < v_n; ++u) {
            cdouble acc = 0.0;
            for (int v = 0; v < v_n; ++v)
                acc += z[g.dd_index(d, v)] * w[static_cast<size_t>((u * v) % v_n)];
            x[d + u * d_n] = acc * scale;
        }
    }
}

}  // namespace detail

/// Discrete Zak transform. Plain sum normalization: ||dzt(x)||^2 = V ||x||^2.
inline DdSignal dzt(const TimeSignal& x, const GridConfig& grid) {
    detail::require_length(x.size(), grid, "dzt");
    DdSignal z;
    detail::dzt_into(x.samples, grid, z.values);
    return z;
}

/// Inverse discrete Zak transform, the exact inverse of dzt (carries the 1/V
/// factor so that idzt(dzt(x)) == x).
inline TimeSignal idzt(const DdSignal& z, const GridConfig& grid) {
    detail::require_length(z.size(), grid, "idzt");
    TimeSignal x;
    detail::idzt_into(z.values, grid, x.samples);
    return x;
}

}  // namespace zakcs
