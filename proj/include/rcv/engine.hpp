#pragma once

#include "rcv/ballots.hpp"
#include "rcv/config.hpp"
#include "rcv/rules.hpp"
#include "rcv/spatial.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace rcv {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RuleResult {
    int winner = -1;  // -1 when the election is degenerate
    double position = kNaN;
    double distance = kNaN;  // |position - median voter|

    friend bool operator==(const RuleResult&, const RuleResult&) = default;
};

/// One simulated election. A degenerate election is one where every voter
/// abstained; its winners are undefined and it is left out of averages.
struct ElectionRecord {
    std::uint64_t index = 0;
    bool degenerate = false;
    std::vector<double> slate;
    std::array<RuleResult, kRuleCount> rules;
    bool condorcet_exists = false;
    double bullet_rate = kNaN;  // length-1 ballots / cast ballots
    double abstention_rate = 0;  // abstainers / electorate
    double median_voter = kNaN;

    const RuleResult& result(Rule rule) const { return rules[static_cast<std::size_t>(rule)]; }
    RuleResult& result(Rule rule) { return rules[static_cast<std::size_t>(rule)]; }
};

struct RuleSummary {
    double average_distance = 0;
    std::vector<std::uint64_t> histogram;
};

struct RunSummary {
    std::uint64_t election_count = 0;
    std::uint64_t degenerate_count = 0;
    std::size_t bins = 0;
    std::array<RuleSummary, kRuleCount> rules;
    double median_bullet_rate = 0;
    double median_abstention_rate = 0;
    double condorcet_fraction = 0;
    double median_voter = 0;  // median of per-election medians
    std::optional<Moments> distribution;
    std::optional<double> analytic_median;

    const RuleSummary& rule(Rule r) const { return rules[static_cast<std::size_t>(r)]; }
};

/// Seed of the shared electorate, or of election `index` when resampling.
std::uint64_t electorate_seed(const RunConfig& config, std::uint64_t index);
std::uint64_t slate_seed(std::uint64_t master_seed, std::uint64_t index);
std::uint64_t voter_seed(std::uint64_t master_seed, std::uint64_t index, std::uint64_t voter);

/// Ballot-type counts for one election, plus the number of abstainers.
struct BallotTally {
    PreferenceProfile profile;
    std::uint64_t abstained = 0;
    std::uint64_t bullets = 0;
};

/// Collects every voter's ballot. When the behavior is a function of position
/// alone, sorted voters are counted a run at a time between the points where
/// the decision can change; `per_voter` forces the voter-by-voter path.
BallotTally collect_ballots(const Electorate& electorate, std::span<const double> slate,
                            const BehaviorSpec& spec, std::uint64_t master_seed,
                            std::uint64_t index, bool per_voter = false);

/// Simulates one election against a prepared electorate. Throws
/// std::logic_error if minimax ever disagrees with an existing Condorcet winner.
ElectionRecord run_election(const Electorate& electorate, const RunConfig& config,
                            std::uint64_t index);

/// Order-independent reduction of index-ordered records.
class SummaryBuilder {
public:
    explicit SummaryBuilder(std::size_t bins);

    void add(const ElectionRecord& record);

    /// Throws DataError when no non-degenerate record was added.
    RunSummary finish() const;

private:
    std::size_t bins_;
    std::uint64_t count_ = 0;
    std::uint64_t degenerate_ = 0;
    std::uint64_t condorcet_ = 0;
    std::array<double, kRuleCount> distance_sums_{};
    std::array<std::vector<std::uint64_t>, kRuleCount> histograms_;
    std::vector<double> bullet_rates_;
    std::vector<double> abstention_rates_;
    std::vector<double> medians_;
};

RunSummary aggregate(std::span<const ElectionRecord> records, std::size_t bins);

using RecordSink = std::function<void(const ElectionRecord&)>;

/// Runs config.elections elections on up to `workers` threads. Records reach
/// `sink` in index order; output does not depend on the worker count.
RunSummary run_batch(const RunConfig& config, const BinWeights& weights, std::size_t workers,
                     const RecordSink& sink = {});

}  // namespace rcv
