#pragma once

#include "rcv/ballots.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace rcv {

/// The five winner-selection rules. The enumerator order is also the
/// precedence order used to break ties between rules.
enum class Rule : std::uint8_t { plurality, irv, minimax, bucklin, borda };

inline constexpr std::size_t kRuleCount = 5;
inline constexpr std::array<Rule, kRuleCount> kAllRules{Rule::plurality, Rule::irv, Rule::minimax,
                                                        Rule::bucklin, Rule::borda};

std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

struct PluralityAudit {
    std::vector<std::uint64_t> tally;
};

struct IrvRound {
    std::vector<std::uint64_t> tally;  // zero for eliminated candidates
    std::uint64_t exhausted = 0;       // ballots ranking no active candidate
    std::optional<CandidateIndex> eliminated;
};

struct IrvAudit {
    std::vector<IrvRound> rounds;
    std::vector<CandidateIndex> elimination_order;
};

struct MinimaxAudit {
    /// Largest head-to-head vote count against each candidate.
    std::vector<std::uint64_t> worst_opposition;
    std::optional<CandidateIndex> condorcet_winner;
};

struct BucklinAudit {
    /// scores[i][c]: ballots ranking c in the top i+1 positions.
    std::vector<std::vector<std::uint64_t>> scores;
    std::uint64_t threshold = 0;
    bool reached_threshold = false;
};

struct BordaAudit {
    std::vector<std::uint64_t> points;
};

using Audit = std::variant<PluralityAudit, IrvAudit, MinimaxAudit, BucklinAudit, BordaAudit>;

struct RuleOutcome {
    CandidateIndex winner = 0;
    Audit audit;
};

// All rules break ties toward the lowest candidate index.

/// Most first-place votes. Throws std::invalid_argument on an empty profile.
RuleOutcome plurality_winner(const PreferenceProfile& profile);

/// Instant runoff. Each round the candidate with the fewest first-place votes
/// among active candidates is eliminated; the count stops once a candidate
/// holds a strict majority of the non-exhausted ballots or one candidate is
/// left. Throws std::invalid_argument on an empty profile.
RuleOutcome irv_winner(const PreferenceProfile& profile);

/// Candidate beating every other head-to-head, if any.
std::optional<CandidateIndex> condorcet_winner(const PreferenceProfile& profile);
std::optional<CandidateIndex> condorcet_winner(const PairwiseMatrix& matrix);

/// The Condorcet winner when there is one, otherwise the candidate with the
/// smallest worst head-to-head opposition.
RuleOutcome minimax_winner(const PreferenceProfile& profile);
RuleOutcome minimax_winner(const PairwiseMatrix& matrix);

/// Bucklin with a fixed threshold of floor(B/2)+1 ballots cast. If no round
/// reaches it, the highest final-round score wins.
RuleOutcome bucklin_winner(const PreferenceProfile& profile);

/// Borda with pessimistic truncation: position i of k earns k-i points,
/// unranked candidates earn nothing.
RuleOutcome borda_winner(const PreferenceProfile& profile);

RuleOutcome run_rule(Rule rule, const PreferenceProfile& profile);

/// JSON view of an audit record; `names` label candidates when given.
nlohmann::ordered_json audit_to_json(const RuleOutcome& outcome, const std::vector<std::string>& names);

}  // namespace rcv
