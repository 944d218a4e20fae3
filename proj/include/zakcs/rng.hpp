// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit
//
// Counter-based random number generation (Philox4x32-10). Every random draw
// in the toolkit flows through RandomStream so that results are bit-identical
// across platforms, runs, and worker counts. The generator, the uniform
// mapping, and the Gaussian transform are fully specified here and in the
// README; no libc or libstdc++ distribution code is involved.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace zakcs {

namespace philox {

inline constexpr uint32_t kMul0 = 0xD2511F53u;
inline constexpr uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr uint32_t kWeyl1 = 0xBB67AE85u;

using Counter = std::array<uint32_t, 4>;
using Key = std::array<uint32_t, 2>;

inline Counter round_once(const Counter& c, const Key& k) {
    const uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
    const uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
    return {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<uint32_t>(p1),
            static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<uint32_t>(p0)};
}

/// Philox4x32 with 10 rounds: maps a 128-bit counter and 64-bit key to four
/// 32-bit words.
inline Counter block(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        ctr = round_once(ctr, key);
    }
    return ctr;
}

}  // namespace philox

/// 64-bit string hash (FNV-1a), used to fold method labels into seeds.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

/// SplitMix64 finalizer, used to combine seed components.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic stream of doubles and complex normals backed by Philox.
/// The key is the 64-bit seed; the 128-bit counter starts at zero and
/// increments once per generated block of four 32-bit words.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)} {}

    uint32_t next_u32() {
        if (have_ == 0) refill();
        return buf_[4 - have_--];
    }

    uint64_t next_u64() {
        const uint64_t lo = next_u32();
        const uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (consumes two uniforms).
    double next_normal() {
        const double u1 = next_double_open();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Circular complex Gaussian with E|z|^2 = 1 (polar form, two uniforms).
    std::complex<double> next_cnormal() {
        const double u1 = next_double_open();
        const double u2 = next_double();
        return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
    }

  private:
    void refill() {
        buf_ = philox::block(ctr_, key_);
        have_ = 4;
        for (int i = 0; i < 4; ++i) {
            if (++ctr_[static_cast<size_t>(i)] != 0) break;  // 128-bit increment
        }
    }

    philox::Key key_;
    philox::Counter ctr_{0, 0, 0, 0};
    philox::Counter buf_{};
    int have_ = 0;
};

/// Per-trial seed: mixes the master seed, the method label, the SNR point
/// (millidecibels; the noiseless sentinel maps to INT64_MAX), and the trial
/// index. Documented so sweeps are reproducible across implementations.
inline uint64_t derive_trial_seed(uint64_t master_seed, std::string_view method_id,
                                  double snr_db, uint64_t trial_index) {
    int64_t snr_key;
    if (std::isinf(snr_db))
        snr_key = INT64_MAX;
    else
        snr_key = static_cast<int64_t>(std::llround(snr_db * 1000.0));
    uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ fnv1a64(method_id));
    s = splitmix64(s ^ static_cast<uint64_t>(snr_key));
    s = splitmix64(s ^ trial_index);
    return s;
}

}  // namespace zakcs
