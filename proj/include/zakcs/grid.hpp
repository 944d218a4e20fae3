// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace zakcs {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Delay-Doppler grid geometry. A frame carries L = D*V symbols sampled at
/// `sample_period` seconds; the Doppler axis is resolved in steps of
/// 1/(L*Ts) hertz. Immutable after construction.
struct GridConfig {
    int delay_bins = 1;          // D
    int doppler_bins = 1;        // V
    double sample_period = 1.0;  // Ts, seconds

    GridConfig(int d, int v, double ts = 1.0)
        : delay_bins(d), doppler_bins(v), sample_period(ts) {
        if (d < 1 || v < 1)
            throw std::invalid_argument("GridConfig: delay_bins and doppler_bins must be >= 1");
        if (!(ts > 0.0))
            throw std::invalid_argument("GridConfig: sample_period must be > 0");
    }

    int symbols() const { return delay_bins * doppler_bins; }  // L
    double doppler_spacing() const {                           // delta-f, hertz
        return 1.0 / (static_cast<double>(symbols()) * sample_period);
    }
    double frame_duration() const { return symbols() * sample_period; }

    // (d, v) <-> l = d + v*D, a bijection on {0..L-1}
    int dd_index(int d, int v) const { return d + v * delay_bins; }
    int delay_of(int l) const { return l % delay_bins; }
    int doppler_of(int l) const { return l / delay_bins; }

    bool operator==(const GridConfig& o) const {
        return delay_bins == o.delay_bins && doppler_bins == o.doppler_bins &&
               sample_period == o.sample_period;
    }
};

/// Length-L sequence of time-domain samples x[n], n = 0..L-1.
struct TimeSignal {
    CVec samples;
    TimeSignal() = default;
    explicit TimeSignal(CVec s) : samples(std::move(s)) {}
    Eigen::Index size() const { return samples.size(); }
};

/// Length-L vector in delay-Doppler order: element l holds the coefficient
/// at delay bin l mod D and Doppler bin floor(l/D).
struct DdSignal {
    CVec values;
    DdSignal() = default;
    explicit DdSignal(CVec v) : values(std::move(v)) {}
    Eigen::Index size() const { return values.size(); }
};

namespace detail {

inline void require_length(Eigen::Index got, const GridConfig& grid, const char* what) {
    if (got != grid.symbols())
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                    " does not match grid L=" + std::to_string(grid.symbols()));
}

}  // namespace detail

}  // namespace zakcs
