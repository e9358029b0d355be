#pragma once

#include <cstdint>
#include <random>

namespace qsb {

// splitmix64; used to whiten (seed, stream) pairs before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent seed for a named substream.  All randomness in a run
// flows from (seed, stream) pairs; there is no global generator anywhere.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

// mt19937_64 wrapper with explicit, implementation-independent mappings to
// [0,1) and to integer ranges, so identical seeds give identical draws on any
// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : gen_(derive_seed(seed, stream)) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0,1), 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n); Lemire's multiply-shift with rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

// Substream labels.  Keeping them in one place avoids accidental collisions.
namespace stream {
inline constexpr std::uint64_t points = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t rejection = 3;
inline constexpr std::uint64_t learner = 4;
inline constexpr std::uint64_t backend = 5;
inline constexpr std::uint64_t heldout = 6;
inline constexpr std::uint64_t checks = 7;
} // namespace stream

} // namespace qsb
