// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "zakcs/grid.hpp"
#include "zakcs/kernels.hpp"
#include "zakcs/rng.hpp"

using namespace zakcs;

namespace {

// Independent oracle: truncated direct summation of sinc(u - m*M).
double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

double periodic_sinc_brute(int m, double u, long half_terms) {
    double acc = sinc(u);
    for (long t = 1; t <= half_terms; ++t) acc += sinc(u - t * m) + sinc(u + t * m);
    return acc;
}

}  // namespace

TEST_CASE("periodic_sinc samples the Kronecker comb at integers") {
    CHECK(periodic_sinc(4, 0.0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(periodic_sinc(4, 1.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(periodic_sinc(4, 2.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(periodic_sinc(4, 3.0) == Catch::Approx(0.0).margin(1e-14));

    for (int m : {3, 4, 5, 8}) {
        for (int n = -3 * m; n <= 3 * m; ++n) {
            const double expect = (n % m == 0) ? 1.0 : 0.0;
            CHECK(periodic_sinc(m, n) == Catch::Approx(expect).margin(1e-12));
        }
    }
}

TEST_CASE("periodic_sinc is M-periodic") {
    for (double u : {0.1, 1.7, 3.3})
        CHECK(periodic_sinc(5, u + 5.0) == Catch::Approx(periodic_sinc(5, u)).margin(1e-13));
}

TEST_CASE("periodic_sinc matches the truncated sinc summation") {
    CHECK(std::abs(periodic_sinc(4, 0.5) - periodic_sinc_brute(4, 0.5, 100000)) <= 1e-6);

    RandomStream rng(0x5eed001);
    for (int m : {4, 5}) {
        for (int i = 0; i < 50; ++i) {
            const double u = rng.next_double() * m;
            CHECK(std::abs(periodic_sinc(m, u) - periodic_sinc_brute(m, u, 200000)) <= 1e-6);
        }
    }
}

TEST_CASE("periodic_sinc rejects invalid period") {
    CHECK_THROWS_AS(periodic_sinc(0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(periodic_sinc(-2, 0.3), std::invalid_argument);
}

TEST_CASE("dirichlet_kernel equals its defining one-sided sum") {
    RandomStream rng(0x5eed002);
    for (int m : {2, 3, 4, 5, 16}) {
        for (int i = 0; i < 30; ++i) {
            const double w = rng.next_double() * 2 * m - m;
            cdouble direct = 0.0;
            for (int u = 0; u < m; ++u)
                direct += std::polar(1.0, -2.0 * std::numbers::pi * u * w / m);
            direct /= static_cast<double>(m);
            CHECK(std::abs(dirichlet_kernel(m, w) - direct) <= 1e-12);
        }
    }
}

TEST_CASE("dirichlet_kernel is M-periodic and comb-valued at integers") {
    for (double w : {0.2, 1.9, 2.7})
        CHECK(std::abs(dirichlet_kernel(6, w + 6.0) - dirichlet_kernel(6, w)) <= 1e-13);
    for (int n = -8; n <= 8; ++n) {
        const cdouble expect = (n % 4 == 0) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
        CHECK(std::abs(dirichlet_kernel(4, n) - expect) <= 1e-12);
    }
}

TEST_CASE("odd-M dirichlet_kernel is periodic_sinc times a linear phase") {
    RandomStream rng(0x5eed003);
    const int m = 5;
    for (int i = 0; i < 20; ++i) {
        const double w = rng.next_double() * m;
        const cdouble phase = std::polar(1.0, -std::numbers::pi * w * (m - 1.0) / m);
        CHECK(std::abs(dirichlet_kernel(m, w) - periodic_sinc(m, w) * phase) <= 1e-12);
    }
}

TEST_CASE("centered_bins covers the window with unit total weight per residue") {
    for (int m : {4, 5, 15, 16}) {
        const auto bins = centered_bins(m);
        double total = 0.0;
        for (const auto& b : bins) total += b.weight;
        CHECK(total == Catch::Approx(static_cast<double>(m)).margin(1e-12));
    }
}
