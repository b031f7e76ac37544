#pragma once

#include "rcv/spatial.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcv {

/// How much perception noise of a given half-width reshuffles complete ballots.
struct NoiseTuningRow {
    double half_width = 0;
    std::uint64_t ballots = 0;
    std::uint64_t changed = 0;    // noisy ballot differs from the noiseless one
    std::uint64_t tau_total = 0;  // summed Kendall-tau distance over all ballots

    double changed_fraction() const;
    double mean_kendall_tau() const;
};

struct NoiseTuningSetup {
    std::size_t candidates = 3;
    std::size_t elections = 1000;
    std::size_t voters = kDefaultVoters;
    std::uint64_t seed = 1;
};

/// For every half-width, compares each voter's complete ballot with and
/// without noise. Slates and per-voter noise streams are shared across
/// half-widths. Throws std::invalid_argument for half-widths outside [0, 0.5].
std::vector<NoiseTuningRow> tune_noise(const BinWeights& weights, const NoiseTuningSetup& setup,
                                       std::span<const double> half_widths, std::size_t workers);

}  // namespace rcv
