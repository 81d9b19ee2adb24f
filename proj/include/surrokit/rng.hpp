#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace surrokit {

// Mixes a word into a seed (splitmix64 finalizer). Used to derive independent
// substreams from one master seed by folding in counters, so the draw order of
// concurrent consumers can never affect each other's streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL + word;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <typename... Words>
std::uint64_t derive_seed(std::uint64_t seed, Words... words) {
    ((seed = mix_seed(seed, static_cast<std::uint64_t>(words))), ...);
    return seed;
}

// Deterministic random stream. The mt19937_64 engine output is fully pinned by
// the standard; distributions are hand-rolled here because the std ones are
// implementation-defined and would break cross-toolchain reproducibility.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Multiply-shift bounding; bias is O(n/2^64).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // Avoid log(0); 2^-53 is the smallest nonzero uniform01 value anyway.
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace surrokit
