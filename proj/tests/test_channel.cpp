// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "support/quasi_circulant.hpp"
#include "zakcs/channel.hpp"
#include "zakcs/oracle.hpp"
#include "zakcs/rng.hpp"

using namespace zakcs;

namespace {

DdSignal pilot_for(const GridConfig& g, uint64_t seed) {
    RandomStream rng(seed);
    return random_pilot(g, rng);
}

// The rank-one Nyquist-edge defect of fractional delay on even-L grids:
// Upsilon^H Upsilon = I - (sin^2(pi alpha)/V) (Z e)(Z e)^H with e[n] = (-1)^n.
CMat edge_defect(const GridConfig& g, double alpha) {
    const int l = g.symbols();
    TimeSignal e{CVec(l)};
    for (int n = 0; n < l; ++n) e.samples[n] = (n % 2 == 0) ? 1.0 : -1.0;
    e.samples /= std::sqrt(static_cast<double>(l));
    const DdSignal ze = dzt(e, g);
    const double s = std::pow(std::sin(std::numbers::pi * alpha), 2);
    return (s / g.doppler_bins) * (ze.values * ze.values.adjoint());
}

}  // namespace

TEST_CASE("atom at the origin is the identity operator") {
    GridConfig g(4, 4);
    const EzcMatrix m = atom_matrix(0.0, 0.0, g);
    CHECK((m.entries - CMat::Identity(16, 16)).norm() <= 1e-12);
}

TEST_CASE("closed-form channel equals the band-limited oracle") {
    // Fractional delays and Dopplers on an even grid, the hard case.
    GridConfig g(8, 8);
    RandomStream rng(0xC0FFEE);
    for (int rep = 0; rep < 3; ++rep) {
        const PathSet paths = random_pathset(3, g, rng);
        const EzcMatrix built = build_ezc(paths);
        const EzcMatrix ref = oracle_ezc(paths, g);
        CHECK((built.entries - ref.entries).norm() <= 1e-9 * ref.entries.norm());
    }
}

TEST_CASE("closed-form channel equals the oracle on odd grids") {
    GridConfig g(3, 5);
    RandomStream rng(0xC0FFEE + 1);
    const PathSet paths = random_pathset(2, g, rng);
    const EzcMatrix built = build_ezc(paths);
    const EzcMatrix ref = oracle_ezc(paths, g);
    CHECK((built.entries - ref.entries).norm() <= 1e-9 * ref.entries.norm());
}

TEST_CASE("atoms are unitary on odd grids") {
    GridConfig g(3, 5);
    RandomStream rng(11);
    for (int rep = 0; rep < 3; ++rep) {
        const double tau = rng.next_double() * g.delay_bins * g.sample_period;
        const double nu = rng.next_double() * g.doppler_bins * g.doppler_spacing();
        const EzcMatrix u = atom_matrix(tau, nu, g);
        CHECK((u.entries.adjoint() * u.entries - CMat::Identity(15, 15)).norm() <= 1e-9);
    }
}

TEST_CASE("even-grid atoms are unitary up to the Nyquist-edge defect") {
    GridConfig g(8, 8);
    RandomStream rng(12);
    for (int rep = 0; rep < 3; ++rep) {
        const double tau = rng.next_double() * g.delay_bins * g.sample_period;
        const double nu = rng.next_double() * g.doppler_bins * g.doppler_spacing();
        const EzcMatrix u = atom_matrix(tau, nu, g);
        const CMat expect =
            CMat::Identity(64, 64) - edge_defect(g, tau / g.sample_period);
        CHECK((u.entries.adjoint() * u.entries - expect).norm() <= 1e-9);
    }
}

TEST_CASE("atom_vector agrees with the dense operator product") {
    GridConfig g(8, 4);
    const DdSignal x = pilot_for(g, 5);
    RandomStream rng(13);
    for (int rep = 0; rep < 4; ++rep) {
        const double tau = rng.next_double() * g.delay_bins * g.sample_period;
        const double nu = rng.next_double() * g.doppler_bins * g.doppler_spacing();
        const DdSignal fast = atom_vector(tau, nu, x, g);
        const CVec dense = atom_matrix(tau, nu, g).entries * x.values;
        CHECK((fast.values - dense).norm() <= 1e-12 * dense.norm());
    }
}

TEST_CASE("atom_vector at the origin returns the pilot unchanged") {
    GridConfig g(4, 4);
    const DdSignal x = pilot_for(g, 6);
    const DdSignal phi = atom_vector(0.0, 0.0, x, g);
    CHECK((phi.values - x.values).norm() <= 1e-13 * x.values.norm());
}

TEST_CASE("atom norms follow the edge-corrected unitarity identity") {
    GridConfig g(8, 8);
    const DdSignal x = pilot_for(g, 7);
    RandomStream rng(14);
    for (int rep = 0; rep < 20; ++rep) {
        const double tau = rng.next_double() * g.delay_bins * g.sample_period;
        const double nu = rng.next_double() * g.doppler_bins * g.doppler_spacing();
        const DdSignal phi = atom_vector(tau, nu, x, g);
        const double deficit = (x.values.adjoint() * (edge_defect(g, tau / g.sample_period) *
                                                      x.values))(0)
                                   .real();
        CHECK(phi.values.squaredNorm() ==
              Catch::Approx(x.values.squaredNorm() - deficit).epsilon(1e-9));
    }
}

TEST_CASE("integer atoms match the probe-assembled channel") {
    GridConfig g(8, 8);
    const double ts = g.sample_period, df = g.doppler_spacing();

    const EzcMatrix direct = atom_matrix(2 * ts, 3 * df, g);
    PathSet one(g, {Path{{1.0, 0.0}, 2 * ts, 3 * df}});
    const EzcMatrix probe = build_ezc_integer(one);
    CHECK((direct.entries - probe.entries).norm() <= 1e-10 * probe.entries.norm());

    const DdSignal x = pilot_for(g, 8);
    const DdSignal phi = atom_vector(2 * ts, 3 * df, x, g);
    CHECK((phi.values - probe.entries * x.values).norm() <= 1e-10 * x.values.norm());
}

TEST_CASE("empty path set builds the zero operator") {
    GridConfig g(4, 4);
    const EzcMatrix h = build_ezc(PathSet(g));
    CHECK(h.entries.norm() == 0.0);
}

TEST_CASE("single unit path at the origin builds the identity") {
    GridConfig g(4, 4);
    PathSet paths(g, {Path{{1.0, 0.0}, 0.0, 0.0}});
    CHECK((build_ezc(paths).entries - CMat::Identity(16, 16)).norm() <= 1e-12);
}

TEST_CASE("integer fast path equals the general builder") {
    GridConfig g(4, 4);
    const double ts = g.sample_period, df = g.doppler_spacing();
    RandomStream rng(15);
    std::vector<Path> paths;
    for (int i = 0; i < 3; ++i)
        paths.push_back(Path{rng.next_cnormal(), static_cast<double>(i + 1) * ts,
                             static_cast<double>((2 * i) % 4) * df});
    PathSet set(g, paths);
    const EzcMatrix fast = build_ezc_integer(set);
    const EzcMatrix general = build_ezc(set);
    CHECK((fast.entries - general.entries).norm() <= 1e-10 * general.entries.norm());
}

TEST_CASE("integer fast path keeps the delay-cyclic support structure") {
    GridConfig g(4, 4);
    PathSet set(g, {Path{{1.0, 0.0}, 2 * g.sample_period, 0.0}});
    const EzcMatrix h = build_ezc_integer(set);
    for (int d = 0; d < 4; ++d)
        for (int v = 0; v < 4; ++v)
            for (int dp = 0; dp < 4; ++dp)
                for (int vp = 0; vp < 4; ++vp) {
                    const cdouble e = h.entries(g.dd_index(d, v), g.dd_index(dp, vp));
                    const bool on = ((d - dp - 2) % 4 + 4) % 4 == 0 && v == vp;
                    if (on)
                        CHECK(std::abs(e) == Catch::Approx(1.0).margin(1e-12));
                    else
                        CHECK(std::abs(e) <= 1e-12);
                }
}

TEST_CASE("integer fast path rejects fractional parameters") {
    GridConfig g(4, 4);
    PathSet set(g, {Path{{1.0, 0.0}, 0.5 * g.sample_period, 0.0}});
    CHECK_THROWS_AS(build_ezc_integer(set), std::invalid_argument);
}

TEST_CASE("a fractional path admits no quasi-circulant representation") {
    GridConfig g(8, 8);
    PathSet set(g, {Path{{1.0, 0.0}, 0.5 * g.sample_period, 0.5 * g.doppler_spacing()}});
    CHECK(testsupport::quasi_circulant_residual(build_ezc(set)) >= 0.01);
}

TEST_CASE("apply_channel is exact when noiseless and linear in the input") {
    GridConfig g(4, 4);
    RandomStream rng(16);
    const PathSet paths = random_pathset(2, g, rng);
    const EzcMatrix h = build_ezc(paths);
    const DdSignal x1 = pilot_for(g, 17), x2 = pilot_for(g, 18);

    RandomStream quiet(0);
    const DdSignal y = apply_channel(h, x1, NoiseSpec(0.0), quiet);
    CHECK((y.values - h.entries * x1.values).norm() == 0.0);

    DdSignal xsum(CVec(x1.values + x2.values));
    const DdSignal ysum = apply_channel(h, xsum, NoiseSpec(0.0), quiet);
    const DdSignal y2 = apply_channel(h, x2, NoiseSpec(0.0), quiet);
    CHECK((ysum.values - y.values - y2.values).norm() <= 1e-12 * ysum.values.norm());
}

TEST_CASE("noise energy concentrates at L sigma^2") {
    GridConfig g(4, 4);
    EzcMatrix eye(g);
    eye.entries.setIdentity();
    const DdSignal zero(CVec::Zero(16));
    RandomStream rng(19);
    double acc = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i)
        acc += apply_channel(eye, zero, NoiseSpec(1.0), rng).values.squaredNorm();
    CHECK(acc / (reps * 16.0) == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("random path sets are normalized and in range") {
    GridConfig g(4, 4);
    RandomStream rng(20);
    for (int rep = 0; rep < 100; ++rep) {
        const PathSet set = random_pathset(3, g, rng);
        CHECK(set.total_power() == Catch::Approx(1.0).margin(1e-12));
        for (const auto& p : set.paths) {
            CHECK(p.delay >= 0.0);
            CHECK(p.delay < g.delay_bins * g.sample_period);
            CHECK(p.doppler >= 0.0);
            CHECK(p.doppler < g.doppler_bins * g.doppler_spacing());
        }
    }
    CHECK_THROWS_AS(random_pathset(0, g, rng), std::invalid_argument);
}

TEST_CASE("random delays concentrate at the interval midpoint") {
    GridConfig g(4, 4);
    RandomStream rng(21);
    double acc = 0.0;
    const int reps = 10000;
    int count = 0;
    for (int i = 0; i < reps / 3 + 1 && count < reps; ++i) {
        const PathSet set = random_pathset(3, g, rng);
        for (const auto& p : set.paths) {
            if (count++ >= reps) break;
            acc += p.delay / g.sample_period;
        }
    }
    CHECK(acc / reps == Catch::Approx(2.0).margin(0.05 * 4.0));
}

TEST_CASE("random pilots are deterministic with unit per-component variance") {
    GridConfig g(4, 4);
    RandomStream a(22), b(22);
    const DdSignal p1 = random_pilot(g, a), p2 = random_pilot(g, b);
    CHECK(p1.values == p2.values);

    RandomStream rng(23);
    double power = 0.0;
    const int pilots = 700;  // > 1e4 entries
    for (int i = 0; i < pilots; ++i) power += random_pilot(g, rng).values.squaredNorm();
    CHECK(power / (pilots * 16.0) == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("out-of-range delays are rejected by the public atom surface") {
    GridConfig g(4, 4);
    const DdSignal x = pilot_for(g, 24);
    CHECK_THROWS_AS(atom_matrix(-0.1 * g.sample_period, 0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(atom_matrix(4.0 * g.sample_period, 0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(atom_vector(4.5 * g.sample_period, 0.0, x, g), std::invalid_argument);
}
