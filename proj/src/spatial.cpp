#include "rcv/spatial.hpp"

#include "rcv/error.hpp"
#include "rcv/seed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rcv {

std::string_view flavor_name(Flavor flavor) {
    return flavor == Flavor::bimodal ? "bimodal" : "trimodal";
}

Flavor flavor_from_name(std::string_view name) {
    if (name == "bimodal") return Flavor::bimodal;
    if (name == "trimodal") return Flavor::trimodal;
    throw ConfigError("unknown flavor '" + std::string(name) + "' (expected bimodal or trimodal)");
}

BinWeights::BinWeights(std::string state, Flavor flavor, std::array<double, kBinCount> raw)
    : state_(std::move(state)), flavor_(flavor) {
    double total = 0;
    for (double w : raw) {
        if (!std::isfinite(w) || w < 0) {
            throw DataError("weights for '" + state_ + "' must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0)) throw DataError("weights for '" + state_ + "' are all zero");
    for (std::size_t i = 0; i < kBinCount; ++i) weights_[i] = raw[i] / total;
}

double BinWeights::bin_midpoint(std::size_t bin) noexcept {
    return kAxisMin + (static_cast<double>(bin) + 0.5) * kBinWidth;
}

std::size_t BinWeights::bin_of(double position) noexcept {
    const auto scaled = std::floor((position - kAxisMin) / kBinWidth);
    if (scaled <= 0) return 0;
    return std::min(static_cast<std::size_t>(scaled), kBinCount - 1);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw DataError("weights line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return value;
}

}  // namespace

std::vector<BinWeights> parse_weights_csv(std::string_view text) {
    std::vector<BinWeights> rows;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    bool header_seen = false;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            const std::vector<std::string> expected{"state", "flavor", "w1", "w2", "w3",
                                                    "w4",    "w5",     "w6", "w7"};
            if (fields != expected) {
                throw DataError("weights header must be state,flavor,w1,w2,w3,w4,w5,w6,w7");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 2 + kBinCount) {
            throw DataError("weights line " + std::to_string(line_no) + ": expected 9 fields");
        }
        std::array<double, kBinCount> raw{};
        for (std::size_t i = 0; i < kBinCount; ++i) raw[i] = parse_double(fields[2 + i], line_no);
        Flavor flavor;
        try {
            flavor = flavor_from_name(fields[1]);
        } catch (const ConfigError& e) {
            throw DataError("weights line " + std::to_string(line_no) + ": " + e.what());
        }
        rows.emplace_back(fields[0], flavor, raw);
    }
    if (!header_seen) throw DataError("weights file is empty");
    return rows;
}

std::vector<BinWeights> load_weights_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read weights file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_weights_csv(text.str());
}

const BinWeights& find_weights(std::span<const BinWeights> rows, std::string_view state,
                               Flavor flavor) {
    for (const auto& row : rows) {
        if (row.state() == state && row.flavor() == flavor) return row;
    }
    throw DataError("no " + std::string(flavor_name(flavor)) + " weights for state '" +
                    std::string(state) + "'");
}

Moments distribution_moments(const BinWeights& weights) {
    Moments m;
    double second = 0;
    for (std::size_t i = 0; i < kBinCount; ++i) {
        const double mid = BinWeights::bin_midpoint(i);
        m.mean += weights.weights()[i] * mid;
        second += weights.weights()[i] * (mid * mid + kBinWidth * kBinWidth / 12.0);
    }
    m.variance = second - m.mean * m.mean;
    return m;
}

double analytic_median(const BinWeights& weights) {
    double cumulative = 0;
    for (std::size_t i = 0; i < kBinCount; ++i) {
        const double w = weights.weights()[i];
        if (w > 0 && cumulative + w >= 0.5) {
            const double left = kAxisMin + static_cast<double>(i) * kBinWidth;
            return left + (0.5 - cumulative) / w * kBinWidth;
        }
        cumulative += w;
    }
    return kAxisMax;
}

Electorate::Electorate(std::vector<double> sorted_positions, std::uint64_t seed)
    : positions_(std::move(sorted_positions)), seed_(seed) {
    if (!std::is_sorted(positions_.begin(), positions_.end())) {
        throw std::invalid_argument("electorate positions must be sorted");
    }
}

Electorate build_electorate(const BinWeights& weights, std::size_t voters, std::uint64_t seed) {
    if (voters == 0) throw std::invalid_argument("electorate needs at least one voter");
    std::array<double, kBinCount> cumulative{};
    std::partial_sum(weights.weights().begin(), weights.weights().end(), cumulative.begin());
    // Last non-empty bin absorbs rounding so every draw lands somewhere.
    for (std::size_t i = kBinCount; i-- > 0;) {
        if (weights.weights()[i] > 0) {
            for (std::size_t j = i; j < kBinCount; ++j) cumulative[j] = 1.0;
            break;
        }
    }
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(StreamTag::electorate)));
    std::vector<double> positions(voters);
    for (auto& p : positions) {
        const double u = rng.uniform();
        const auto bin = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        p = kAxisMin + (static_cast<double>(bin) + rng.uniform()) * kBinWidth;
        p = std::min(p, kAxisMax);
    }
    std::sort(positions.begin(), positions.end());
    return Electorate(std::move(positions), seed);
}

double median_of_sorted(std::span<const double> sorted) {
    if (sorted.empty()) throw std::invalid_argument("median of an empty electorate");
    return sorted[(sorted.size() + 1) / 2 - 1];
}

double median_voter(const Electorate& electorate) {
    return median_of_sorted(electorate.positions());
}

CandidateSlate sample_candidates(const Electorate& electorate, std::size_t k, std::uint64_t seed) {
    if (k != 3 && k != 4) throw std::invalid_argument("candidate count must be 3 or 4");
    if (k > electorate.size()) throw std::invalid_argument("more candidates than voters");
    SplitMix64 rng(seed);
    CandidateSlate slate;
    while (slate.voter_indices.size() < k) {
        const auto pick = static_cast<std::size_t>(rng.below(electorate.size()));
        if (std::find(slate.voter_indices.begin(), slate.voter_indices.end(), pick) !=
            slate.voter_indices.end()) {
            continue;
        }
        slate.voter_indices.push_back(pick);
        slate.positions.push_back(electorate.positions()[pick]);
    }
    return slate;
}

Ranking rank_by_distance(double voter, std::span<const double> candidates) {
    if (candidates.empty() || candidates.size() > kMaxCandidates) {
        throw std::invalid_argument("slate size out of range");
    }
    std::array<CandidateIndex, kMaxCandidates> order{};
    std::array<double, kMaxCandidates> distance{};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        order[c] = static_cast<CandidateIndex>(c);
        distance[c] = std::abs(voter - candidates[c]);
    }
    // Insertion sort; stable, so equal distances keep index order.
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const auto c = order[i];
        std::size_t j = i;
        while (j > 0 && distance[order[j - 1]] > distance[c]) {
            order[j] = order[j - 1];
            --j;
        }
        order[j] = c;
    }
    return Ranking(std::span<const CandidateIndex>(order.data(), candidates.size()));
}

}  // namespace rcv
