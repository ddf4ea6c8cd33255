// Seeded deterministic random streams for Monte Carlo trials.
//
// A stream is identified by a master seed plus a short key path (stream tag,
// sweep cell, trial index, ...). Streams with distinct key paths are
// statistically independent, and the same key path always reproduces the
// same draws, so trials can run in any order or in parallel.

#ifndef SUBSKETCH_RNG_HPP
#define SUBSKETCH_RNG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <vector>

namespace subsketch {

// SplitMix64 finalizer, used to mix seed material into stream keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    // Derives an independent stream from (seed, key path). Mixing after each
    // component makes the derivation order-sensitive, so {1,2} and {2,1}
    // name different streams.
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t state = mix64(seed);
        for (std::uint64_t k : keys) state = mix64(state ^ (k + 0x9e3779b97f4a7c15ULL));
        engine_.seed(state);
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log argument.
    double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double gaussian() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Circularly symmetric complex Gaussian CN(0, variance): real and
    // imaginary parts are independent N(0, variance/2).
    std::complex<double> complex_gaussian(double variance) {
        const double radius = std::sqrt(-variance * std::log(uniform_pos()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return std::polar(radius, angle);
    }

    // Uniform integer in [0, n). Lemire-style scaling; the O(n / 2^64) bias
    // is irrelevant at Monte Carlo scale.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // k distinct values from {0, ..., n-1}, returned sorted.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
            const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace subsketch

#endif // SUBSKETCH_RNG_HPP
