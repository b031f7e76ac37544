#include "rcv/rules.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace rcv {

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleNames{"plurality", "irv", "minimax",
                                                               "bucklin", "borda"};

/// Index of the largest entry; the first one on ties.
CandidateIndex argmax(const std::vector<std::uint64_t>& values) {
    return static_cast<CandidateIndex>(std::max_element(values.begin(), values.end()) -
                                       values.begin());
}

void require_ballots(const PreferenceProfile& profile) {
    if (profile.candidate_count() == 0 || profile.total() == 0) {
        throw std::invalid_argument("profile has no ballots");
    }
}

}  // namespace

std::string_view rule_name(Rule rule) { return kRuleNames[static_cast<std::size_t>(rule)]; }

std::optional<Rule> rule_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kRuleCount; ++i) {
        if (kRuleNames[i] == name) return kAllRules[i];
    }
    return std::nullopt;
}

RuleOutcome plurality_winner(const PreferenceProfile& profile) {
    require_ballots(profile);
    auto tally = first_place_tally(profile);
    const auto winner = argmax(tally);
    return {winner, PluralityAudit{std::move(tally)}};
}

RuleOutcome irv_winner(const PreferenceProfile& profile) {
    require_ballots(profile);
    const auto k = profile.candidate_count();
    std::vector<bool> active(k, true);
    std::size_t remaining = k;
    IrvAudit audit;

    while (true) {
        IrvRound round;
        round.tally = first_place_tally(profile, active);
        std::uint64_t counted = 0;
        for (auto t : round.tally) counted += t;
        round.exhausted = profile.total() - counted;

        CandidateIndex leader = 0;
        std::optional<CandidateIndex> loser;
        for (std::size_t c = 0; c < k; ++c) {
            if (!active[c]) continue;
            if (!active[leader] || round.tally[c] > round.tally[leader]) {
                leader = static_cast<CandidateIndex>(c);
            }
            if (!loser || round.tally[c] < round.tally[*loser]) loser = static_cast<CandidateIndex>(c);
        }

        if (remaining == 1 || 2 * round.tally[leader] > counted) {
            audit.rounds.push_back(std::move(round));
            return {leader, std::move(audit)};
        }
        round.eliminated = loser;
        audit.elimination_order.push_back(*loser);
        audit.rounds.push_back(std::move(round));
        active[*loser] = false;
        --remaining;
    }
}

std::optional<CandidateIndex> condorcet_winner(const PairwiseMatrix& matrix) {
    const auto k = matrix.candidate_count();
    for (std::size_t x = 0; x < k; ++x) {
        bool beats_all = true;
        for (std::size_t y = 0; y < k && beats_all; ++y) {
            if (y != x && matrix.at(x, y) <= matrix.at(y, x)) beats_all = false;
        }
        if (beats_all) return static_cast<CandidateIndex>(x);
    }
    return std::nullopt;
}

std::optional<CandidateIndex> condorcet_winner(const PreferenceProfile& profile) {
    return condorcet_winner(pairwise_matrix(profile));
}

RuleOutcome minimax_winner(const PairwiseMatrix& matrix) {
    const auto k = matrix.candidate_count();
    MinimaxAudit audit;
    audit.worst_opposition.assign(k, 0);
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t y = 0; y < k; ++y) {
            if (y != x) audit.worst_opposition[x] = std::max(audit.worst_opposition[x], matrix.at(y, x));
        }
    }
    if (k == 0) throw std::invalid_argument("profile has no candidates");
    audit.condorcet_winner = condorcet_winner(matrix);
    // With truncated ballots a Condorcet winner can have a larger worst
    // opposition than some other candidate, so it is checked first.
    const auto winner = audit.condorcet_winner.value_or(static_cast<CandidateIndex>(
        std::min_element(audit.worst_opposition.begin(), audit.worst_opposition.end()) -
        audit.worst_opposition.begin()));
    return {winner, std::move(audit)};
}

RuleOutcome minimax_winner(const PreferenceProfile& profile) {
    return minimax_winner(pairwise_matrix(profile));
}

RuleOutcome bucklin_winner(const PreferenceProfile& profile) {
    require_ballots(profile);
    const auto k = profile.candidate_count();
    BucklinAudit audit;
    audit.threshold = profile.total() / 2 + 1;
    std::vector<std::uint64_t> score(k, 0);
    for (std::size_t round = 0; round < k; ++round) {
        for (const auto& ballot : profile.ballots()) {
            if (round < ballot.ranking.size()) score[ballot.ranking[round]] += ballot.count;
        }
        audit.scores.push_back(score);
        const auto best = argmax(score);
        if (score[best] >= audit.threshold) {
            audit.reached_threshold = true;
            return {best, std::move(audit)};
        }
    }
    const auto best = argmax(score);
    return {best, std::move(audit)};
}

RuleOutcome borda_winner(const PreferenceProfile& profile) {
    require_ballots(profile);
    const auto k = profile.candidate_count();
    BordaAudit audit;
    audit.points.assign(k, 0);
    for (const auto& ballot : profile.ballots()) {
        for (std::size_t i = 0; i < ballot.ranking.size(); ++i) {
            audit.points[ballot.ranking[i]] += ballot.count * (k - 1 - i);
        }
    }
    const auto winner = argmax(audit.points);
    return {winner, std::move(audit)};
}

RuleOutcome run_rule(Rule rule, const PreferenceProfile& profile) {
    switch (rule) {
        case Rule::plurality: return plurality_winner(profile);
        case Rule::irv: return irv_winner(profile);
        case Rule::minimax: return minimax_winner(profile);
        case Rule::bucklin: return bucklin_winner(profile);
        case Rule::borda: return borda_winner(profile);
    }
    throw std::invalid_argument("unknown rule");
}

namespace {

std::string label(CandidateIndex c, const std::vector<std::string>& names) {
    return c < names.size() ? names[c] : std::to_string(c);
}

nlohmann::ordered_json labeled(const std::vector<std::uint64_t>& values,
                       const std::vector<std::string>& names) {
    auto out = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < values.size(); ++c) {
        out[label(static_cast<CandidateIndex>(c), names)] = values[c];
    }
    return out;
}

struct AuditJson {
    const std::vector<std::string>& names;

    nlohmann::ordered_json operator()(const PluralityAudit& a) const {
        return {{"tally", labeled(a.tally, names)}};
    }

    nlohmann::ordered_json operator()(const IrvAudit& a) const {
        auto rounds = nlohmann::ordered_json::array();
        for (const auto& r : a.rounds) {
            nlohmann::ordered_json round{{"tally", labeled(r.tally, names)}, {"exhausted", r.exhausted}};
            round["eliminated"] = r.eliminated ? nlohmann::ordered_json(label(*r.eliminated, names))
                                               : nlohmann::ordered_json(nullptr);
            rounds.push_back(std::move(round));
        }
        auto order = nlohmann::ordered_json::array();
        for (auto c : a.elimination_order) order.push_back(label(c, names));
        return {{"rounds", std::move(rounds)}, {"elimination_order", std::move(order)}};
    }

    nlohmann::ordered_json operator()(const MinimaxAudit& a) const {
        return {{"worst_opposition", labeled(a.worst_opposition, names)},
                {"condorcet_winner", a.condorcet_winner
                                         ? nlohmann::ordered_json(label(*a.condorcet_winner, names))
                                         : nlohmann::ordered_json(nullptr)}};
    }

    nlohmann::ordered_json operator()(const BucklinAudit& a) const {
        auto rounds = nlohmann::ordered_json::array();
        for (const auto& s : a.scores) rounds.push_back(labeled(s, names));
        return {{"threshold", a.threshold},
                {"reached_threshold", a.reached_threshold},
                {"rounds", std::move(rounds)}};
    }

    nlohmann::ordered_json operator()(const BordaAudit& a) const {
        return {{"points", labeled(a.points, names)}};
    }
};

}  // namespace

nlohmann::ordered_json audit_to_json(const RuleOutcome& outcome, const std::vector<std::string>& names) {
    nlohmann::ordered_json out{{"winner", label(outcome.winner, names)}};
    out["audit"] = std::visit(AuditJson{names}, outcome.audit);
    return out;
}

}  // namespace rcv
