#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace vacrng {

/// SplitMix64 step; used for seeding and for deriving independent per-block streams.
constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    auto z = x;
    z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z      = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mixes a base seed with a stream index (block number, worker-independent).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t x = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    splitmix64(x);
    return splitmix64(x);
}

/**
 * xoshiro256++ (Blackman & Vigna). Deterministic simulation PRNG; not for key material.
 * Satisfies UniformRandomBitGenerator so it also plugs into <random> distributions.
 */
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    constexpr explicit Xoshiro256pp(std::uint64_t seed = 1) noexcept {
        auto x = seed;
        for (auto& v : state_) {
            v = splitmix64(x);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        const auto result = rotl(state_[0] + state_[3], 23) + state_[0];
        const auto t      = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (-1, 1).
    constexpr double uniform_m11() noexcept {
        return static_cast<double>(static_cast<std::int64_t>((*this)()) >> 11) * 0x1.0p-52;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/// Standard normal variates via the Marsaglia polar method; caches the spare.
class GaussianSource {
public:
    explicit GaussianSource(Xoshiro256pp& rng) noexcept : rng_(rng) {}

    double operator()() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = rng_.uniform_m11();
            v = rng_.uniform_m11();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_              = v * factor;
        has_spare_          = true;
        return u * factor;
    }

    void fill(std::span<double> out, double stddev = 1.0) noexcept {
        for (auto& x : out) {
            x = stddev * (*this)();
        }
    }

private:
    Xoshiro256pp& rng_;
    double        spare_     = 0.0;
    bool          has_spare_ = false;
};

} // namespace vacrng
