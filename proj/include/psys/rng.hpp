#pragma once

#include <cstdint>
#include <random>

namespace psys {

/// Seeded generator with platform-independent output.
///
/// The bit stream is std::mt19937_64, whose sequence the C++ standard pins
/// down exactly. The standard distributions are not portable, so bounded
/// integers and reals are derived here: below() uses rejection sampling on
/// the raw 64-bit output, uniform() takes the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Requires n >= 1; n == 1 consumes no draw.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % n;
    }

    /// Uniform real in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p. p <= 0 and p >= 1 consume no draw.
    bool bernoulli(double p) {
        if (p <= 0.0) {
            return false;
        }
        if (p >= 1.0) {
            return true;
        }
        return uniform() < p;
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; derives independent per-run seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace psys
