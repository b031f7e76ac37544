#pragma once

#include "rcv/rules.hpp"
#include "rcv/spatial.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rcv {

/// (a - b) / b, or nothing when b is zero.
std::optional<double> relative_difference(double avg_a, double avg_b);

/// (to - from) / from, or nothing when from is zero.
std::optional<double> relative_change(double rd_from, double rd_to);

/// Reflection-symmetric state coordinates: (|mean|, variance).
Moments embed_state(Moments moments);

using RuleAverages = std::array<std::optional<double>, kRuleCount>;

/// Rule with the smallest average distance to the median voter. Ties go to the
/// earlier rule in plurality, IRV, minimax, Bucklin, Borda order. With
/// `decimals`, averages are compared after rounding to that many places.
/// Throws std::invalid_argument when every average is missing.
Rule most_moderating(const RuleAverages& averages, std::optional<int> decimals = std::nullopt);

/// Bin of `position` among `bins` equal bins over [-0.5, 0.5]; 0.5 falls in the last bin.
std::size_t histogram_bin(double position, std::size_t bins);

/// Counts per uniform bin over [-0.5, 0.5]. Throws std::invalid_argument for
/// bins == 0 or positions outside the axis.
std::vector<std::uint64_t> winner_histogram(std::span<const double> positions, std::size_t bins);

/// Fixed three-decimal presentation used in every table.
std::string format_ratio(std::optional<double> value);

}  // namespace rcv
