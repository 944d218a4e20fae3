// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zakcs/rng.hpp"

using namespace zakcs;

TEST_CASE("philox4x32-10 matches known-answer vectors") {
    using philox::block;
    {
        const auto out = block({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
    {
        const auto out = block({1, 0, 0, 0}, {0xdeadbeefu, 0xcafebabeu});
        CHECK(out[0] == 0xbccf4048u);
        CHECK(out[1] == 0xd52cee32u);
        CHECK(out[2] == 0x6a15ddc1u);
        CHECK(out[3] == 0xcde4ff67u);
    }
}

TEST_CASE("streams with equal seeds replay bit-identically") {
    RandomStream a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal &= (va == vb);
        any_diff |= (va != vc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform draws live in the documented intervals") {
    RandomStream rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    RandomStream rng2(8);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng2.next_double_open();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("complex normals have unit power and zero mean") {
    RandomStream rng(0xabcdef);
    const int n = 100000;
    std::complex<double> mean = 0.0;
    double power = 0.0, re_var = 0.0, im_var = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.next_cnormal();
        mean += z;
        power += std::norm(z);
        re_var += z.real() * z.real();
        im_var += z.imag() * z.imag();
    }
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) < 0.01);
    CHECK(power / n == Catch::Approx(1.0).epsilon(0.02));
    CHECK(re_var / n == Catch::Approx(0.5).epsilon(0.03));
    CHECK(im_var / n == Catch::Approx(0.5).epsilon(0.03));
}

TEST_CASE("trial seeds separate methods, SNR points, and trials") {
    const uint64_t m = 99;
    const uint64_t s1 = derive_trial_seed(m, "omp_k4", 10.0, 0);
    CHECK(s1 == derive_trial_seed(m, "omp_k4", 10.0, 0));
    CHECK(s1 != derive_trial_seed(m, "omp_k1", 10.0, 0));
    CHECK(s1 != derive_trial_seed(m, "omp_k4", 15.0, 0));
    CHECK(s1 != derive_trial_seed(m, "omp_k4", 10.0, 1));
    CHECK(s1 != derive_trial_seed(m + 1, "omp_k4", 10.0, 0));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(derive_trial_seed(m, "omp_k4", inf, 0) == derive_trial_seed(m, "omp_k4", inf, 0));
}
