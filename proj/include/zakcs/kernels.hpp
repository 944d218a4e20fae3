// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace zakcs {

// Band-limited periodic interpolation works on the centered frequency window
// of length M. For odd M the window is k in [-(M-1)/2, (M-1)/2] with unit
// weight; for even M it is k in [-M/2, M/2] where the two edge bins carry
// weight 1/2 each (they alias onto the same sample content, and splitting
// them is what keeps the interpolation kernel real).
struct CenteredBin {
    long k;
    double weight;
};

inline std::vector<CenteredBin> centered_bins(int m) {
    if (m < 1) throw std::invalid_argument("centered_bins: M must be >= 1");
    std::vector<CenteredBin> bins;
    if (m % 2 == 1) {
        bins.reserve(m);
        for (long k = -(m - 1) / 2; k <= (m - 1) / 2; ++k) bins.push_back({k, 1.0});
    } else {
        bins.reserve(m + 1);
        bins.push_back({-m / 2, 0.5});
        for (long k = -m / 2 + 1; k <= m / 2 - 1; ++k) bins.push_back({k, 1.0});
        bins.push_back({m / 2, 0.5});
    }
    return bins;
}

/// M-periodic summation of the unit sinc, g_M(u) = sum_m sinc(u - m*M),
/// evaluated in closed form. Real-valued; g_M(n) is 1 at n == 0 (mod M) and
/// 0 at other integers.
inline double periodic_sinc(int m, double u) {
    if (m < 1) throw std::invalid_argument("periodic_sinc: M must be >= 1");
    if (m == 1) return 1.0;
    const double md = static_cast<double>(m);
    double w = u - md * std::round(u / md);  // reduce to [-M/2, M/2]
    if (std::abs(w) < 1e-9) return 1.0;      // removable singularity, error O(w^2)
    const double pi = std::numbers::pi;
    const double num = std::sin(pi * w);
    const double den = md * std::sin(pi * w / md);
    if (m % 2 == 1) return num / den;
    return num * std::cos(pi * w / md) / den;
}

/// One-sided Dirichlet kernel, (1/M) * sum_{u=0}^{M-1} exp(-i 2 pi u w / M).
/// This is the M-periodic complex kernel the discrete Zak transform induces
/// along each axis; for odd M it equals periodic_sinc times a linear phase.
inline std::complex<double> dirichlet_kernel(int m, double w) {
    if (m < 1) throw std::invalid_argument("dirichlet_kernel: M must be >= 1");
    if (m == 1) return {1.0, 0.0};
    const double md = static_cast<double>(m);
    double wr = w - md * std::round(w / md);
    if (std::abs(wr) < 1e-9) return {1.0, 0.0};
    const double pi = std::numbers::pi;
    const double ratio = std::sin(pi * wr) / (md * std::sin(pi * wr / md));
    return std::polar(ratio, -pi * wr * (md - 1.0) / md);
}

}  // namespace zakcs
