#include "rcv/tuning.hpp"

#include "rcv/behavior.hpp"
#include "rcv/engine.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace rcv {

double NoiseTuningRow::changed_fraction() const {
    return ballots ? static_cast<double>(changed) / static_cast<double>(ballots) : 0.0;
}

double NoiseTuningRow::mean_kendall_tau() const {
    return ballots ? static_cast<double>(tau_total) / static_cast<double>(ballots) : 0.0;
}

std::vector<NoiseTuningRow> tune_noise(const BinWeights& weights, const NoiseTuningSetup& setup,
                                       std::span<const double> half_widths, std::size_t workers) {
    for (double h : half_widths) {
        if (!(h >= 0 && h <= 0.5)) throw std::invalid_argument("noise half-width outside [0, 0.5]");
    }
    if (setup.candidates != 3 && setup.candidates != 4) {
        throw std::invalid_argument("candidate count must be 3 or 4");
    }
    if (setup.voters < setup.candidates) throw std::invalid_argument("fewer voters than candidates");
    const auto electorate = build_electorate(weights, setup.voters, setup.seed);
    const auto voters = electorate.positions();

    // per_election[e][h] holds the partial counts of election e at half-width h.
    std::vector<std::vector<NoiseTuningRow>> per_election(
        setup.elections, std::vector<NoiseTuningRow>(half_widths.size()));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (auto e = next++; e < setup.elections; e = next++) {
            const auto slate =
                sample_candidates(electorate, setup.candidates, slate_seed(setup.seed, e));
            auto& rows = per_election[e];
            for (std::size_t i = 0; i < voters.size(); ++i) {
                const auto honest = rank_by_distance(voters[i], slate.positions);
                const auto stream = voter_seed(setup.seed, e, i);
                for (std::size_t h = 0; h < half_widths.size(); ++h) {
                    const auto seen = apply_noise(stream, slate.positions, half_widths[h]);
                    const auto noisy = rank_by_distance(voters[i], std::span<const double>(seen.data(), seen.size()));
                    const auto tau = kendall_tau(honest, noisy);
                    ++rows[h].ballots;
                    rows[h].changed += tau > 0 ? 1 : 0;
                    rows[h].tau_total += tau;
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < std::min(std::max<std::size_t>(workers, 1), setup.elections); ++w) {
            pool.emplace_back(work);
        }
        work();
    }

    std::vector<NoiseTuningRow> totals(half_widths.size());
    for (std::size_t h = 0; h < half_widths.size(); ++h) {
        totals[h].half_width = half_widths[h];
        for (const auto& rows : per_election) {
            totals[h].ballots += rows[h].ballots;
            totals[h].changed += rows[h].changed;
            totals[h].tau_total += rows[h].tau_total;
        }
    }
    return totals;
}

}  // namespace rcv
