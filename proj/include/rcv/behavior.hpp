#pragma once

#include "rcv/ballots.hpp"

#include <boost/container/static_vector.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcv {

class SplitMix64;

// Voter behavior models. A voter turns a candidate slate into either a ballot
// or an abstention through three optional stages applied in order:
//
//   1. noise       each candidate position is shifted by an independent
//                  uniform draw in [-h, h], separately for every voter
//   2. abstention  the voter stays home when no candidate is within the cutoff
//   3. truncation  ideological (rank only candidates within a cutoff, bullet
//                  vote for the nearest when none is) or random (ballot length
//                  drawn from a fixed distribution)
//
// Rankings are always by ascending perceived distance. Whether the abstention
// and ideological cutoffs measure perceived or true distance is selectable.

enum class Model {
    theoretical_ideal,
    ideological_truncation,
    random_truncation,
    abstention,
    noise,
    most_realistic,
};

inline constexpr std::array<Model, 6> kAllModels{
    Model::theoretical_ideal, Model::ideological_truncation, Model::random_truncation,
    Model::abstention,        Model::noise,                  Model::most_realistic};

std::string_view model_name(Model model);
/// Throws ConfigError naming the six valid models.
Model model_from_name(std::string_view name);

enum class Truncation { none, ideological, random };
enum class PerceptionBasis { perceived, true_position };

std::string_view basis_name(PerceptionBasis basis);
PerceptionBasis basis_from_name(std::string_view name);

struct LengthProbability {
    std::size_t length = 0;
    double probability = 0;

    friend bool operator==(const LengthProbability&, const LengthProbability&) = default;
};

inline constexpr double kIdeologicalCutoff3 = 0.37;
inline constexpr double kIdeologicalCutoff4 = 0.26;
inline constexpr double kAbstentionCutoff = 0.14;
inline constexpr double kNoiseHalfWidth = 0.14;

struct BehaviorSpec {
    Truncation truncation = Truncation::none;
    double ideological_cutoff = kIdeologicalCutoff3;
    /// Explicit ballot lengths; the leftover probability mass casts a complete ballot.
    std::vector<LengthProbability> random_lengths;
    std::optional<double> abstention_cutoff;
    std::optional<double> noise_half_width;
    PerceptionBasis basis = PerceptionBasis::perceived;

    /// Throws ConfigError if parameters are out of range for `k` candidates.
    void validate(std::size_t k) const;

    /// True when a voter's decision depends only on their position.
    bool position_determined() const noexcept;

    friend bool operator==(const BehaviorSpec&, const BehaviorSpec&) = default;
};

/// The published parameters for each model at slate size k ∈ {3, 4}.
BehaviorSpec default_spec(Model model, std::size_t k);

/// Ballot-length distribution for random truncation: k=3 {1: 0.35};
/// k=4 {1: 0.34, 2: 0.20}. Throws std::invalid_argument for other k.
std::vector<LengthProbability> default_random_lengths(std::size_t k);

using Positions = boost::container::static_vector<double, kMaxCandidates>;

/// Positions as seen by one voter. half_width must be >= 0.
Positions apply_noise(std::uint64_t voter_seed, std::span<const double> slate, double half_width);
Positions apply_noise(SplitMix64& rng, std::span<const double> slate, double half_width);

/// True iff every candidate is farther than `cutoff`.
bool should_abstain(double voter, std::span<const double> candidates, double cutoff);

/// Candidates within `cutoff`, nearest first, or a bullet vote for the nearest
/// candidate when none qualifies.
Ranking truncate_ideological(double voter, std::span<const double> perceived, double cutoff);

/// Prefix of `complete` whose length is picked by `draw` ∈ [0, 1) against the
/// cumulative length distribution.
Ranking truncate_random(const Ranking& complete, double draw,
                        std::span<const LengthProbability> lengths);
Ranking truncate_random_seeded(const Ranking& complete, std::uint64_t seed,
                               std::span<const LengthProbability> lengths);

struct BallotDecision {
    std::optional<Ranking> ballot;  // empty when the voter abstained
    Positions perceived;

    bool abstained() const noexcept { return !ballot.has_value(); }
};

/// Runs the full behavior pipeline for one voter. All randomness comes from
/// a SplitMix64 stream seeded with `voter_seed`: noise draws first (one per
/// candidate), then one draw for random truncation.
BallotDecision decide_ballot(double voter, std::span<const double> slate, const BehaviorSpec& spec,
                             std::uint64_t voter_seed);

/// Number of discordant pairs between two complete rankings of the same
/// candidates. Throws std::invalid_argument otherwise.
std::size_t kendall_tau(const Ranking& a, const Ranking& b);
/// As above, additionally requiring both rankings to have `candidate_count` entries.
std::size_t kendall_tau(const Ranking& a, const Ranking& b, std::size_t candidate_count);

}  // namespace rcv
