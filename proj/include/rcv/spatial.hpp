#pragma once

#include "rcv/ballots.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcv {

inline constexpr std::size_t kBinCount = 7;
inline constexpr double kAxisMin = -0.5;
inline constexpr double kAxisMax = 0.5;
inline constexpr double kBinWidth = (kAxisMax - kAxisMin) / kBinCount;
inline constexpr std::size_t kDefaultVoters = 100'001;

enum class Flavor { bimodal, trimodal };

std::string_view flavor_name(Flavor flavor);
Flavor flavor_from_name(std::string_view name);  // throws ConfigError

/// Seven bin weights over [-0.5, 0.5], normalized to sum to one.
class BinWeights {
public:
    /// Throws DataError on negative, non-finite, or all-zero weights.
    BinWeights(std::string state, Flavor flavor, std::array<double, kBinCount> raw);

    const std::string& state() const noexcept { return state_; }
    Flavor flavor() const noexcept { return flavor_; }
    const std::array<double, kBinCount>& weights() const noexcept { return weights_; }

    static double bin_midpoint(std::size_t bin) noexcept;

    /// Bin containing `position`: [left, right) except the last bin, which is closed.
    static std::size_t bin_of(double position) noexcept;

private:
    std::string state_;
    Flavor flavor_;
    std::array<double, kBinCount> weights_{};
};

/// Reads a weights CSV with header `state,flavor,w1,...,w7`. Throws DataError.
std::vector<BinWeights> parse_weights_csv(std::string_view text);
std::vector<BinWeights> load_weights_csv(const std::filesystem::path& path);

/// Row matching (state, flavor). Throws DataError when absent.
const BinWeights& find_weights(std::span<const BinWeights> rows, std::string_view state,
                               Flavor flavor);

struct Moments {
    double mean = 0;
    double variance = 0;
};

/// Closed-form moments of the piecewise-uniform mixture.
Moments distribution_moments(const BinWeights& weights);

/// Point where the mixture CDF reaches one half.
double analytic_median(const BinWeights& weights);

/// Sorted voter positions drawn from a weight distribution.
class Electorate {
public:
    Electorate(std::vector<double> sorted_positions, std::uint64_t seed);

    std::span<const double> positions() const noexcept { return positions_; }
    std::size_t size() const noexcept { return positions_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::vector<double> positions_;
    std::uint64_t seed_;
};

/// Each voter's bin is drawn in proportion to its weight, then the position is
/// uniform inside the bin. Deterministic in (weights, n, seed).
Electorate build_electorate(const BinWeights& weights, std::size_t voters, std::uint64_t seed);

/// The ceil(n/2)-th smallest position. Throws std::invalid_argument when empty.
double median_voter(const Electorate& electorate);
double median_of_sorted(std::span<const double> sorted);

struct CandidateSlate {
    std::vector<double> positions;
    std::vector<std::size_t> voter_indices;

    std::size_t size() const noexcept { return positions.size(); }
};

/// Citizen candidates: k ∈ {3, 4} distinct voters chosen uniformly.
/// Throws std::invalid_argument for other k or k > n.
CandidateSlate sample_candidates(const Electorate& electorate, std::size_t k, std::uint64_t seed);

/// Complete ranking by ascending distance from `voter`; equal distances go to
/// the lower candidate index.
Ranking rank_by_distance(double voter, std::span<const double> candidates);

}  // namespace rcv
