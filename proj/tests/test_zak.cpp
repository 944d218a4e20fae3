// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "zakcs/rng.hpp"
#include "zakcs/zak.hpp"

using namespace zakcs;

namespace {

TimeSignal random_time_signal(const GridConfig& g, uint64_t seed) {
    RandomStream rng(seed);
    TimeSignal x(CVec(g.symbols()));
    for (Eigen::Index i = 0; i < x.samples.size(); ++i) x.samples[i] = rng.next_cnormal();
    return x;
}

}  // namespace

TEST_CASE("dzt of a unit impulse spreads flat across Doppler") {
    GridConfig g(4, 2);
    TimeSignal x(CVec::Zero(8));
    x.samples[0] = 1.0;
    const DdSignal z = dzt(x, g);
    for (int d = 0; d < 4; ++d)
        for (int v = 0; v < 2; ++v) {
            const cdouble expect = (d == 0) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
            CHECK(std::abs(z.values[g.dd_index(d, v)] - expect) <= 1e-14);
        }
}

TEST_CASE("dzt of the all-ones signal concentrates at Doppler zero") {
    GridConfig g(4, 4);
    TimeSignal x(CVec::Ones(16));
    const DdSignal z = dzt(x, g);
    for (int d = 0; d < 4; ++d)
        for (int v = 0; v < 4; ++v) {
            const cdouble expect = (v == 0) ? cdouble{4.0, 0.0} : cdouble{0.0, 0.0};
            CHECK(std::abs(z.values[g.dd_index(d, v)] - expect) <= 1e-13);
        }
}

TEST_CASE("dzt with D=1 reduces to the plain DFT") {
    const int l = 16;
    GridConfig g(1, l);
    const TimeSignal x = random_time_signal(g, 0x2a17);
    const DdSignal z = dzt(x, g);
    for (int k = 0; k < l; ++k) {
        cdouble dft = 0.0;
        for (int n = 0; n < l; ++n)
            dft += x.samples[n] * std::polar(1.0, -2.0 * std::numbers::pi * n * k / l);
        CHECK(std::abs(z.values[k] - dft) <= 1e-10 * std::abs(dft) + 1e-10);
    }
}

TEST_CASE("dzt/idzt round trips are the identity") {
    for (auto [d, v] : {std::pair{4, 4}, std::pair{3, 5}, std::pair{16, 16}}) {
        GridConfig g(d, v);
        const TimeSignal x = random_time_signal(g, 0xbeef00 + d);
        const DdSignal z = dzt(x, g);
        const TimeSignal x2 = idzt(z, g);
        CHECK((x2.samples - x.samples).norm() <= 1e-12 * x.samples.norm());

        const DdSignal z2 = dzt(idzt(z, g), g);
        CHECK((z2.values - z.values).norm() <= 1e-12 * z.values.norm());
    }
}

TEST_CASE("dzt scales energy by V") {
    GridConfig g(8, 4);
    const TimeSignal x = random_time_signal(g, 0x77);
    const DdSignal z = dzt(x, g);
    CHECK(z.values.squaredNorm() ==
          Catch::Approx(4.0 * x.samples.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("idzt of a delay-Doppler impulse is a scaled delay comb") {
    // Exact inversion forces the 1/V factor, so the comb height is 1/V.
    GridConfig g(4, 4);
    DdSignal z(CVec::Zero(16));
    z.values[g.dd_index(0, 0)] = 1.0;
    const TimeSignal x = idzt(z, g);
    for (int n = 0; n < 16; ++n) {
        const cdouble expect = (n % 4 == 0) ? cdouble{0.25, 0.0} : cdouble{0.0, 0.0};
        CHECK(std::abs(x.samples[n] - expect) <= 1e-14);
    }
}

TEST_CASE("idzt is linear") {
    GridConfig g(4, 4);
    RandomStream rng(0x1234);
    DdSignal z(CVec(16));
    for (int i = 0; i < 16; ++i) z.values[i] = rng.next_cnormal();
    const cdouble c{0.7, -1.3};
    DdSignal zc(CVec(16));
    zc.values = c * z.values;
    CHECK((idzt(zc, g).samples - c * idzt(z, g).samples).norm() <= 1e-13);
}

TEST_CASE("transforms reject length mismatches") {
    GridConfig g(4, 4);
    CHECK_THROWS_AS(dzt(TimeSignal(CVec::Zero(15)), g), std::invalid_argument);
    CHECK_THROWS_AS(idzt(DdSignal(CVec::Zero(17)), g), std::invalid_argument);
}
