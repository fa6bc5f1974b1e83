// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cyla {

namespace detail {

inline uint64_t splitmix64_step(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic substream seed derived from a master seed and up to two
/// stream tags. Trials and modules draw from disjoint streams so results do
/// not depend on evaluation order.
inline uint64_t derive_seed(uint64_t master, uint64_t tag_a, uint64_t tag_b = 0) {
    uint64_t s = master;
    (void)detail::splitmix64_step(s);
    s ^= 0xA0761D6478BD642Full * (tag_a + 1);
    (void)detail::splitmix64_step(s);
    s ^= 0xE7037ED1A0B428DBull * (tag_b + 1);
    return detail::splitmix64_step(s);
}

/// Seeded random stream. The Gaussian path is an explicit Box-Muller transform
/// on top of mt19937_64 so sequences are identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one spare value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circular complex Gaussian with E|z|^2 = sigma2.
    std::complex<double> complex_gaussian(double sigma2) {
        const double s = std::sqrt(0.5 * sigma2);
        return {s * gaussian(), s * gaussian()};
    }

    /// Unit-modulus QPSK symbol from {1, j, -1, -j}.
    std::complex<double> qpsk() {
        switch (engine_() & 3u) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cyla
