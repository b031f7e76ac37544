#include "rcv/engine.hpp"

#include "rcv/behavior.hpp"
#include "rcv/error.hpp"
#include "rcv/seed.hpp"
#include "rcv/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rcv {

namespace {

// Elections computed between two in-order flushes to the sink.
constexpr std::size_t kChunkSize = 1024;

/// Ballot codes: sum of (candidate + 1) * (k + 1)^position. Code 0 means abstained.
class BallotCodec {
public:
    explicit BallotCodec(std::size_t k) : k_(k), base_(k + 1), size_(1) {
        for (std::size_t i = 0; i < k; ++i) size_ *= base_;
    }

    std::size_t table_size() const noexcept { return size_; }

    std::size_t encode(const BallotDecision& decision) const {
        if (decision.abstained()) return 0;
        std::size_t code = 0;
        std::size_t place = 1;
        for (auto c : *decision.ballot) {
            code += (static_cast<std::size_t>(c) + 1) * place;
            place *= base_;
        }
        return code;
    }

    Ranking decode(std::size_t code) const {
        Ranking ranking;
        while (code != 0) {
            ranking.push_back(static_cast<CandidateIndex>(code % base_ - 1));
            code /= base_;
        }
        return ranking;
    }

    bool is_bullet(std::size_t code) const noexcept { return code != 0 && code < base_; }

private:
    std::size_t k_;
    std::size_t base_;
    std::size_t size_;
};

/// Positions where a position-determined decision can change.
std::vector<double> decision_breakpoints(std::span<const double> slate, const BehaviorSpec& spec) {
    std::vector<double> points;
    for (std::size_t a = 0; a < slate.size(); ++a) {
        for (std::size_t b = a + 1; b < slate.size(); ++b) points.push_back((slate[a] + slate[b]) / 2);
    }
    const auto add_band = [&](double cutoff) {
        for (double c : slate) {
            points.push_back(c - cutoff);
            points.push_back(c + cutoff);
        }
    };
    if (spec.truncation == Truncation::ideological) add_band(spec.ideological_cutoff);
    if (spec.abstention_cutoff) add_band(*spec.abstention_cutoff);
    return points;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2;
}

}  // namespace

std::uint64_t electorate_seed(const RunConfig& config, std::uint64_t index) {
    if (!config.resample_electorate) return config.seed;
    return derive_seed(config.seed, static_cast<std::uint64_t>(StreamTag::electorate), index + 1);
}

std::uint64_t slate_seed(std::uint64_t master_seed, std::uint64_t index) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(StreamTag::slate), index);
}

std::uint64_t voter_seed(std::uint64_t master_seed, std::uint64_t index, std::uint64_t voter) {
    const auto election =
        derive_seed(master_seed, static_cast<std::uint64_t>(StreamTag::voters), index);
    return derive_seed(election, voter);
}

BallotTally collect_ballots(const Electorate& electorate, std::span<const double> slate,
                            const BehaviorSpec& spec, std::uint64_t master_seed,
                            std::uint64_t index, bool per_voter) {
    const BallotCodec codec(slate.size());
    std::vector<std::uint64_t> counts(codec.table_size(), 0);
    const auto voters = electorate.positions();
    const auto election =
        derive_seed(master_seed, static_cast<std::uint64_t>(StreamTag::voters), index);

    const auto code_at = [&](std::size_t i) {
        return codec.encode(decide_ballot(voters[i], slate, spec, derive_seed(election, i)));
    };
    const auto count_each = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) ++counts[code_at(i)];
    };

    if (per_voter || !spec.position_determined()) {
        count_each(0, voters.size());
    } else {
        std::vector<std::size_t> cuts{0, voters.size()};
        for (double point : decision_breakpoints(slate, spec)) {
            cuts.push_back(static_cast<std::size_t>(
                std::upper_bound(voters.begin(), voters.end(), point) - voters.begin()));
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
            const auto lo = cuts[r];
            const auto hi = cuts[r + 1];
            const auto first = code_at(lo);
            if (hi - lo == 1) {
                ++counts[first];
            } else if (code_at(hi - 1) == first) {
                counts[first] += hi - lo;
            } else {
                // Rounding put a breakpoint inside the run; count it voter by voter.
                count_each(lo, hi);
            }
        }
    }

    BallotTally tally;
    tally.abstained = counts[0];
    std::vector<BallotType> ballots;
    for (std::size_t code = 1; code < counts.size(); ++code) {
        if (counts[code] == 0) continue;
        if (codec.is_bullet(code)) tally.bullets += counts[code];
        ballots.push_back({codec.decode(code), counts[code]});
    }
    tally.profile = PreferenceProfile(slate.size(), std::move(ballots));
    return tally;
}

ElectionRecord run_election(const Electorate& electorate, const RunConfig& config,
                            std::uint64_t index) {
    const auto spec = config.behavior();
    const auto slate = sample_candidates(electorate, config.candidates, slate_seed(config.seed, index));
    const auto tally = collect_ballots(electorate, slate.positions, spec, config.seed, index);

    ElectionRecord record;
    record.index = index;
    record.slate = slate.positions;
    record.median_voter = median_voter(electorate);
    record.abstention_rate =
        static_cast<double>(tally.abstained) / static_cast<double>(electorate.size());
    const auto cast = tally.profile.total();
    if (cast == 0) {
        record.degenerate = true;
        return record;
    }
    record.bullet_rate = static_cast<double>(tally.bullets) / static_cast<double>(cast);

    const auto matrix = pairwise_matrix(tally.profile);
    const auto condorcet = condorcet_winner(matrix);
    record.condorcet_exists = condorcet.has_value();

    std::array<CandidateIndex, kRuleCount> winners{};
    winners[static_cast<std::size_t>(Rule::plurality)] = plurality_winner(tally.profile).winner;
    winners[static_cast<std::size_t>(Rule::irv)] = irv_winner(tally.profile).winner;
    winners[static_cast<std::size_t>(Rule::minimax)] = minimax_winner(matrix).winner;
    winners[static_cast<std::size_t>(Rule::bucklin)] = bucklin_winner(tally.profile).winner;
    winners[static_cast<std::size_t>(Rule::borda)] = borda_winner(tally.profile).winner;

    if (condorcet && winners[static_cast<std::size_t>(Rule::minimax)] != *condorcet) {
        throw std::logic_error("minimax winner differs from the Condorcet winner in election " +
                               std::to_string(index));
    }
    for (std::size_t r = 0; r < kRuleCount; ++r) {
        auto& result = record.rules[r];
        result.winner = winners[r];
        result.position = slate.positions[winners[r]];
        result.distance = std::abs(result.position - record.median_voter);
    }
    return record;
}

SummaryBuilder::SummaryBuilder(std::size_t bins) : bins_(bins) {
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    for (auto& h : histograms_) h.assign(bins, 0);
}

void SummaryBuilder::add(const ElectionRecord& record) {
    ++count_;
    abstention_rates_.push_back(record.abstention_rate);
    medians_.push_back(record.median_voter);
    if (record.degenerate) {
        ++degenerate_;
        return;
    }
    if (record.condorcet_exists) ++condorcet_;
    bullet_rates_.push_back(record.bullet_rate);
    for (std::size_t r = 0; r < kRuleCount; ++r) {
        distance_sums_[r] += record.rules[r].distance;
        ++histograms_[r][histogram_bin(record.rules[r].position, bins_)];
    }
}

RunSummary SummaryBuilder::finish() const {
    const auto decided = count_ - degenerate_;
    if (decided == 0) throw DataError("no election produced a winner");
    RunSummary summary;
    summary.election_count = count_;
    summary.degenerate_count = degenerate_;
    summary.bins = bins_;
    for (std::size_t r = 0; r < kRuleCount; ++r) {
        summary.rules[r].average_distance = distance_sums_[r] / static_cast<double>(decided);
        summary.rules[r].histogram = histograms_[r];
    }
    summary.median_bullet_rate = median_of(bullet_rates_);
    summary.median_abstention_rate = median_of(abstention_rates_);
    summary.condorcet_fraction = static_cast<double>(condorcet_) / static_cast<double>(decided);
    summary.median_voter = median_of(medians_);
    return summary;
}

RunSummary aggregate(std::span<const ElectionRecord> records, std::size_t bins) {
    SummaryBuilder builder(bins);
    for (const auto& record : records) builder.add(record);
    return builder.finish();
}

RunSummary run_batch(const RunConfig& config, const BinWeights& weights, std::size_t workers,
                     const RecordSink& sink) {
    config.validate();
    workers = std::max<std::size_t>(workers, 1);
    std::optional<Electorate> shared;
    if (!config.resample_electorate) {
        shared = build_electorate(weights, config.voters, electorate_seed(config, 0));
    }

    const auto simulate = [&](std::uint64_t index) {
        if (shared) return run_election(*shared, config, index);
        const auto own = build_electorate(weights, config.voters, electorate_seed(config, index));
        return run_election(own, config, index);
    };

    SummaryBuilder builder(config.bins);
    std::vector<ElectionRecord> chunk;
    for (std::size_t start = 0; start < config.elections; start += kChunkSize) {
        const auto size = std::min(kChunkSize, config.elections - start);
        chunk.assign(size, {});
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const auto work = [&] {
            try {
                for (auto i = next++; i < size; i = next++) chunk[i] = simulate(start + i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = size;
            }
        };
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 1; w < std::min(workers, size); ++w) pool.emplace_back(work);
            work();
        }
        if (failure) std::rethrow_exception(failure);
        for (const auto& record : chunk) {
            if (sink) sink(record);
            builder.add(record);
        }
    }

    auto summary = builder.finish();
    summary.distribution = distribution_moments(weights);
    summary.analytic_median = analytic_median(weights);
    return summary;
}

}  // namespace rcv
