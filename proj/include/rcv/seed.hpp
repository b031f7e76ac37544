#pragma once

#include <cstdint>

namespace rcv {

// Seed derivation and the per-stream generator.
//
// Every random quantity in a run is drawn from a SplitMix64 stream whose seed
// is derived from the master seed by derive_seed(). The mapping is fixed:
//
//   derive_seed(s, a, b) = mix64(mix64(s ^ mix64(a + G)) ^ mix64(b + 2G))
//
// where G = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 finalizer
// (xor-shift 30, *0xBF58476D1CE4E5B9, xor-shift 27, *0x94D049BB133111EB,
// xor-shift 31). Changing any of this changes every published output.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
    return mix64(mix64(seed ^ mix64(a + kGolden)) ^ mix64(b + 2 * kGolden));
}

/// Stream tags used with derive_seed so independent consumers never overlap.
enum class StreamTag : std::uint64_t {
    electorate = 1,
    slate = 2,
    voters = 3,
};

/// SplitMix64 generator. Small state, so one can be built per voter.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, bound). bound must be > 0.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift with rejection.
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace rcv
