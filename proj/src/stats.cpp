#include "rcv/stats.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rcv {

std::optional<double> relative_difference(double avg_a, double avg_b) {
    if (avg_b == 0) return std::nullopt;
    return (avg_a - avg_b) / avg_b;
}

std::optional<double> relative_change(double rd_from, double rd_to) {
    if (rd_from == 0) return std::nullopt;
    return (rd_to - rd_from) / rd_from;
}

Moments embed_state(Moments moments) { return {std::abs(moments.mean), moments.variance}; }

Rule most_moderating(const RuleAverages& averages, std::optional<int> decimals) {
    const double scale = decimals ? std::pow(10.0, *decimals) : 1.0;
    std::optional<Rule> best;
    double best_value = 0;
    for (auto rule : kAllRules) {
        const auto& avg = averages[static_cast<std::size_t>(rule)];
        if (!avg) continue;
        const double value = decimals ? std::round(*avg * scale) : *avg;
        if (!best || value < best_value) {
            best = rule;
            best_value = value;
        }
    }
    if (!best) throw std::invalid_argument("no rule has a defined average");
    return *best;
}

std::size_t histogram_bin(double position, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    if (!(position >= kAxisMin && position <= kAxisMax)) {
        throw std::invalid_argument("position outside [-0.5, 0.5]");
    }
    const auto bin = static_cast<std::size_t>((position - kAxisMin) * static_cast<double>(bins));
    return bin < bins ? bin : bins - 1;
}

std::vector<std::uint64_t> winner_histogram(std::span<const double> positions, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    std::vector<std::uint64_t> counts(bins, 0);
    for (double p : positions) ++counts[histogram_bin(p, bins)];
    return counts;
}

std::string format_ratio(std::optional<double> value) {
    if (!value) return "";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", *value);
    std::string text = buffer;
    if (text == "-0.000") text = "0.000";
    return text;
}

}  // namespace rcv
