#include "rcv/behavior.hpp"

#include "rcv/error.hpp"
#include "rcv/seed.hpp"
#include "rcv/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcv {

namespace {

constexpr std::array<std::string_view, 6> kModelNames{
    "theoretical-ideal", "ideological-truncation", "random-truncation",
    "abstention",        "noise",                  "most-realistic"};

// Tolerance on probability sums read from config files.
constexpr double kProbabilitySlack = 1e-12;

double nearest_distance(double voter, std::span<const double> candidates) {
    double best = std::abs(voter - candidates[0]);
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        best = std::min(best, std::abs(voter - candidates[c]));
    }
    return best;
}

/// Candidates whose `basis` distance is within cutoff, ordered by perceived
/// distance. Falls back to the nearest candidate by basis distance.
Ranking select_within(double voter, std::span<const double> perceived,
                      std::span<const double> basis, double cutoff) {
    const Ranking order = rank_by_distance(voter, perceived);
    Ranking kept;
    for (auto c : order) {
        if (std::abs(voter - basis[c]) <= cutoff) kept.push_back(c);
    }
    if (kept.empty()) kept.push_back(rank_by_distance(voter, basis).front());
    return kept;
}

}  // namespace

std::string_view model_name(Model model) { return kModelNames[static_cast<std::size_t>(model)]; }

Model model_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kModelNames.size(); ++i) {
        if (kModelNames[i] == name) return kAllModels[i];
    }
    std::string valid;
    for (auto n : kModelNames) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw ConfigError("unknown model '" + std::string(name) + "'; valid models: " + valid);
}

std::string_view basis_name(PerceptionBasis basis) {
    return basis == PerceptionBasis::perceived ? "perceived" : "true";
}

PerceptionBasis basis_from_name(std::string_view name) {
    if (name == "perceived") return PerceptionBasis::perceived;
    if (name == "true") return PerceptionBasis::true_position;
    throw ConfigError("perception basis must be 'perceived' or 'true'");
}

void BehaviorSpec::validate(std::size_t k) const {
    if (truncation == Truncation::ideological && !(ideological_cutoff >= 0)) {
        throw ConfigError("ideological cutoff must be non-negative");
    }
    if (truncation == Truncation::random) {
        double total = 0;
        for (const auto& [length, p] : random_lengths) {
            if (length < 1 || length > k) {
                throw ConfigError("random truncation length " + std::to_string(length) +
                                  " outside 1.." + std::to_string(k));
            }
            if (!(p >= 0)) throw ConfigError("random truncation probabilities must be >= 0");
            total += p;
        }
        if (total > 1 + kProbabilitySlack) {
            throw ConfigError("random truncation probabilities sum to more than 1");
        }
    }
    if (abstention_cutoff && !(*abstention_cutoff >= 0)) {
        throw ConfigError("abstention cutoff must be non-negative");
    }
    if (noise_half_width && !(*noise_half_width >= 0)) {
        throw ConfigError("noise half-width must be non-negative");
    }
}

bool BehaviorSpec::position_determined() const noexcept {
    const bool noisy = noise_half_width && *noise_half_width > 0;
    return !noisy && truncation != Truncation::random;
}

std::vector<LengthProbability> default_random_lengths(std::size_t k) {
    if (k == 3) return {{1, 0.35}};
    if (k == 4) return {{1, 0.34}, {2, 0.20}};
    throw std::invalid_argument("random truncation is calibrated for 3 or 4 candidates only");
}

BehaviorSpec default_spec(Model model, std::size_t k) {
    if (k != 3 && k != 4) throw std::invalid_argument("candidate count must be 3 or 4");
    BehaviorSpec spec;
    spec.ideological_cutoff = k == 3 ? kIdeologicalCutoff3 : kIdeologicalCutoff4;
    spec.random_lengths = default_random_lengths(k);
    switch (model) {
        case Model::theoretical_ideal: break;
        case Model::ideological_truncation: spec.truncation = Truncation::ideological; break;
        case Model::random_truncation: spec.truncation = Truncation::random; break;
        case Model::abstention: spec.abstention_cutoff = kAbstentionCutoff; break;
        case Model::noise: spec.noise_half_width = kNoiseHalfWidth; break;
        case Model::most_realistic:
            spec.truncation = Truncation::ideological;
            spec.abstention_cutoff = kAbstentionCutoff;
            spec.noise_half_width = kNoiseHalfWidth;
            break;
    }
    return spec;
}

Positions apply_noise(SplitMix64& rng, std::span<const double> slate, double half_width) {
    if (!(half_width >= 0)) throw std::invalid_argument("noise half-width must be non-negative");
    if (slate.size() > kMaxCandidates) throw std::invalid_argument("slate too large");
    Positions perceived;
    for (double c : slate) perceived.push_back(c + half_width * (2.0 * rng.uniform() - 1.0));
    return perceived;
}

Positions apply_noise(std::uint64_t voter_seed, std::span<const double> slate, double half_width) {
    SplitMix64 rng(voter_seed);
    return apply_noise(rng, slate, half_width);
}

bool should_abstain(double voter, std::span<const double> candidates, double cutoff) {
    if (candidates.empty()) return true;
    return nearest_distance(voter, candidates) > cutoff;
}

Ranking truncate_ideological(double voter, std::span<const double> perceived, double cutoff) {
    return select_within(voter, perceived, perceived, cutoff);
}

Ranking truncate_random(const Ranking& complete, double draw,
                        std::span<const LengthProbability> lengths) {
    double cumulative = 0;
    for (const auto& [length, p] : lengths) {
        cumulative += p;
        if (draw < cumulative) {
            Ranking prefix = complete;
            prefix.truncate(length);
            return prefix;
        }
    }
    return complete;
}

Ranking truncate_random_seeded(const Ranking& complete, std::uint64_t seed,
                        std::span<const LengthProbability> lengths) {
    double total = 0;
    for (const auto& l : lengths) total += l.probability;
    if (total > 1 + kProbabilitySlack) {
        throw std::invalid_argument("ballot length probabilities sum to more than 1");
    }
    SplitMix64 rng(seed);
    return truncate_random(complete, rng.uniform(), lengths);
}

BallotDecision decide_ballot(double voter, std::span<const double> slate, const BehaviorSpec& spec,
                             std::uint64_t voter_seed) {
    SplitMix64 rng(voter_seed);
    BallotDecision decision;
    if (spec.noise_half_width && *spec.noise_half_width > 0) {
        decision.perceived = apply_noise(rng, slate, *spec.noise_half_width);
    } else {
        decision.perceived.assign(slate.begin(), slate.end());
    }
    const std::span<const double> perceived(decision.perceived.data(), decision.perceived.size());
    const std::span<const double> basis =
        spec.basis == PerceptionBasis::perceived ? perceived : slate;

    if (spec.abstention_cutoff && should_abstain(voter, basis, *spec.abstention_cutoff)) {
        return decision;
    }
    switch (spec.truncation) {
        case Truncation::none:
            decision.ballot = rank_by_distance(voter, perceived);
            break;
        case Truncation::ideological:
            decision.ballot = select_within(voter, perceived, basis, spec.ideological_cutoff);
            break;
        case Truncation::random:
            decision.ballot = truncate_random(rank_by_distance(voter, perceived), rng.uniform(),
                                              spec.random_lengths);
            break;
    }
    return decision;
}

std::size_t kendall_tau(const Ranking& a, const Ranking& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rankings differ in length");
    for (auto c : a) {
        if (!b.contains(c)) throw std::invalid_argument("rankings cover different candidates");
    }
    std::size_t discordant = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            // a ranks a[i] above a[j]; discordant if b disagrees.
            if (b.position_of(a[i]) > b.position_of(a[j])) ++discordant;
        }
    }
    return discordant;
}

std::size_t kendall_tau(const Ranking& a, const Ranking& b, std::size_t candidate_count) {
    if (a.size() != candidate_count || b.size() != candidate_count) {
        throw std::invalid_argument("kendall tau needs complete rankings");
    }
    return kendall_tau(a, b);
}

}  // namespace rcv
