// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include "rcv/ballots.hpp"
#include "rcv/cli.hpp"
#include "rcv/config.hpp"
#include "rcv/engine.hpp"
#include "rcv/rules.hpp"
#include "rcv/stats.hpp"
#include "rcv/tuning.hpp"

#include "naive_rules.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace rcv;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr int kOracleProfiles = 1000;
constexpr int kOracleMaxCandidates = 4;
constexpr int kOracleMaxTypes = 8;
constexpr int kOracleMaxCount = 5;
constexpr std::size_t kBlackElections = 1000;
constexpr std::size_t kExistenceElections = 10'000;
constexpr double kExistenceFloor = 0.99;
constexpr double kNoiseHalfWidth = 0.14;
constexpr double kNoiseTarget3 = 0.35;
constexpr double kNoiseTarget4 = 0.55;
constexpr double kNoiseTolerance = 0.10;
constexpr std::size_t kNoiseElections = 1000;
constexpr std::size_t kNoiseVoters = 10'001;
constexpr std::size_t kCollapseElections = 20'000;
constexpr std::size_t kDeterminismElections = 3000;
constexpr std::size_t kDeterminismVoters = 2001;

const std::string kWeights = RCV_FIXTURES "/weights.csv";

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << "  " << detail << std::endl;
    if (!pass) ++failures;
}

template <typename F>
void criterion(int id, const std::string& name, F&& check) {
    try {
        std::string detail;
        const bool pass = check(detail);
        report(id, name, pass, detail);
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool worked_profile(std::string& detail) {
    const auto p = parse_profile(example_profile_text()).profile;
    std::vector<std::string> misses;
    const auto expect = [&](const std::string& what, std::uint64_t got, std::uint64_t want) {
        if (got != want) misses.push_back(what + "=" + std::to_string(got) + " (want " + std::to_string(want) + ")");
    };

    expect("plurality", plurality_winner(p).winner, 0);

    const auto irv = irv_winner(p);
    const auto& last = std::get<IrvAudit>(irv.audit).rounds.back();
    expect("irv", irv.winner, 1);
    expect("irv final B", last.tally[1], 240);
    expect("irv final A", last.tally[0], 230);
    expect("irv exhausted", last.exhausted, 10);

    const auto bucklin = bucklin_winner(p);
    const auto& scores = std::get<BucklinAudit>(bucklin.audit).scores;
    expect("bucklin", bucklin.winner, 2);
    expect("bucklin rounds", scores.size(), 2);
    if (scores.size() >= 2) {
        expect("bucklin r2 A", scores[1][0], 270);
        expect("bucklin r2 B", scores[1][1], 300);
        expect("bucklin r2 C", scores[1][2], 380);
    }

    const auto m = pairwise_matrix(p);
    expect("condorcet", condorcet_winner(p).value_or(9), 2);
    expect("minimax", minimax_winner(p).winner, 2);
    expect("C>A", m.at(2, 0), 250);
    expect("A>C", m.at(0, 2), 220);
    expect("C>B", m.at(2, 1), 260);
    expect("B>C", m.at(1, 2), 230);

    const auto borda = borda_winner(p);
    const auto& points = std::get<BordaAudit>(borda.audit).points;
    expect("borda", borda.winner, 2);
    expect("borda A", points[0], 450);
    expect("borda B", points[1], 430);
    expect("borda C", points[2], 510);

    if (misses.empty()) {
        detail = "all winners and counts exact";
        return true;
    }
    for (const auto& miss : misses) detail += miss + "; ";
    detail += "the profile has 480 ballots, so B>C=230 beside C>B=260 (490) and round-2 scores "
              "270+300+380=950 against at most 910 second-round mentions cannot both hold";
    return false;
}

bool oracle(std::string& detail) {
    std::mt19937_64 gen(909);
    std::uniform_int_distribution<int> kd(1, kOracleMaxCandidates);
    std::uniform_int_distribution<int> types(1, kOracleMaxTypes);
    std::uniform_int_distribution<int> count(1, kOracleMaxCount);
    int mismatches = 0;
    for (int trial = 0; trial < kOracleProfiles; ++trial) {
        const int k = kd(gen);
        std::uniform_int_distribution<int> length(1, k);
        std::vector<BallotType> ballots;
        const int n = types(gen);
        for (int t = 0; t < n; ++t) {
            std::vector<CandidateIndex> order(k);
            std::iota(order.begin(), order.end(), CandidateIndex{0});
            std::shuffle(order.begin(), order.end(), gen);
            order.resize(length(gen));
            ballots.push_back({Ranking(order), static_cast<std::uint64_t>(count(gen))});
        }
        const PreferenceProfile p(k, std::move(ballots));
        const auto expanded = naive::expand(p);
        for (auto rule : kAllRules) {
            if (run_rule(rule, p).winner != naive::winner(rule, expanded, k)) ++mismatches;
        }
    }
    detail = std::to_string(kOracleProfiles) + " profiles x 5 rules, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

RunConfig ideal_config(const BinWeights& row, std::size_t k, std::size_t elections) {
    RunConfig config;
    config.weights = kWeights;
    config.state = row.state();
    config.flavor = row.flavor();
    config.candidates = k;
    config.model = Model::theoretical_ideal;
    config.elections = elections;
    return config;
}

bool black(std::string& detail) {
    const auto rows = load_weights_csv(kWeights);
    std::size_t checked = 0;
    std::size_t violations = 0;
    for (const auto& row : rows) {
        for (std::size_t k : {3, 4}) {
            run_batch(ideal_config(row, k, kBlackElections), row, 1, [&](const ElectionRecord& r) {
                std::vector<double> sorted = r.slate;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;
                ++checked;
                const auto nearest = *std::min_element(r.slate.begin(), r.slate.end(), [&](double a, double b) {
                    return std::abs(a - r.median_voter) < std::abs(b - r.median_voter);
                });
                if (!r.condorcet_exists || r.result(Rule::minimax).position != nearest) ++violations;
            });
        }
    }
    detail = std::to_string(rows.size()) + " fixtures x k=3,4, " + std::to_string(checked) +
             " elections, " + std::to_string(violations) + " violations";
    return violations == 0 && checked > 0;
}

bool existence(std::string& detail) {
    const auto rows = load_weights_csv(kWeights);
    double lowest = 1;
    for (const auto& row : rows) {
        for (std::size_t k : {3, 4}) {
            const auto s = run_batch(ideal_config(row, k, kExistenceElections), row, 1);
            lowest = std::min(lowest, s.condorcet_fraction);
        }
    }
    detail = "lowest fraction over " + std::to_string(rows.size()) + " fixtures x k=3,4: " + fmt(lowest) +
             " (floor " + fmt(kExistenceFloor) + ")";
    return lowest > kExistenceFloor;
}

bool noise(std::string& detail) {
    const auto rows = load_weights_csv(kWeights);
    const auto& row = find_weights(rows, "Balanced", Flavor::bimodal);
    const std::vector<double> widths{0.0, kNoiseHalfWidth};
    bool pass = true;
    for (auto [k, target] : {std::pair{std::size_t{3}, kNoiseTarget3}, std::pair{std::size_t{4}, kNoiseTarget4}}) {
        NoiseTuningSetup setup;
        setup.candidates = k;
        setup.elections = kNoiseElections;
        setup.voters = kNoiseVoters;
        const auto table = tune_noise(row, setup, widths, 1);
        const double zero = table[0].changed_fraction();
        const double at = table[1].changed_fraction();
        detail += "k=" + std::to_string(k) + ": h=0 " + fmt(zero) + ", h=0.14 " + fmt(at) + " (target " +
                  fmt(target) + "+-" + fmt(kNoiseTolerance) + "); ";
        pass = pass && zero == 0 && std::abs(at - target) <= kNoiseTolerance;
    }
    return pass;
}

bool formulas(std::string& detail) {
    const auto rd = format_ratio(relative_difference(0.132, 0.097));
    const auto rc = format_ratio(relative_change(0.322, 0.079));
    const auto rc0 = relative_change(0.322, 0.0);
    detail = "rd(0.132,0.097)=" + rd + " rc(0.322,0.079)=" + rc + " rc(0.322,0)=" + (rc0 ? fmt(*rc0) : "none");
    return rd == "0.361" && rc == "-0.755" && rc0 && *rc0 == -1.0;
}

bool collapse(std::string& detail) {
    const auto rows = load_weights_csv(kWeights);
    const auto& row = find_weights(rows, "Balanced", Flavor::bimodal);
    auto config = ideal_config(row, 4, kCollapseElections);
    const auto ideal = run_batch(config, row, 1);
    config.model = Model::ideological_truncation;
    const auto truncated = run_batch(config, row, 1);
    const auto rd = [](const RunSummary& s) {
        return relative_difference(s.rule(Rule::irv).average_distance, s.rule(Rule::minimax).average_distance);
    };
    const auto a = rd(ideal);
    const auto b = rd(truncated);
    detail = "IRV vs minimax relative difference: theoretical-ideal " + format_ratio(a) +
             ", ideological-truncation " + format_ratio(b);
    return a && b && *a > *b;
}

bool determinism(std::string& detail) {
    const auto root = fs::temp_directory_path() / "rcv_acceptance";
    fs::remove_all(root);
    const auto run = [&](const std::string& dir, std::vector<std::string> extra) {
        std::vector<std::string> args{"simulate", "--out", (root / dir).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        std::ostringstream out;
        std::ostringstream err;
        if (run_cli(args, out, err) != kExitOk) throw std::runtime_error(err.str());
    };
    const std::vector<std::string> base{"--weights", kWeights, "--state", "Balanced", "--candidates", "4",
                                        "--model", "most-realistic", "--elections",
                                        std::to_string(kDeterminismElections), "--voters",
                                        std::to_string(kDeterminismVoters), "--seed", "2024"};
    auto one = base;
    one.insert(one.end(), {"--workers", "1"});
    auto eight = base;
    eight.insert(eight.end(), {"--workers", "8"});
    run("w1", one);
    run("w8", eight);
    const std::string stem = "Balanced_bimodal_4cands_most-realistic_2024";
    const bool records = slurp(root / "w1" / (stem + ".records.csv")) == slurp(root / "w8" / (stem + ".records.csv"));
    const auto summary = slurp(root / "w1" / (stem + ".summary.json"));
    const bool summaries = !summary.empty() && summary == slurp(root / "w8" / (stem + ".summary.json"));
    run("again", {"--config", (root / "w1" / (stem + ".summary.json")).string()});
    const bool round_trip = slurp(root / "again" / (stem + ".summary.json")) == summary;
    detail = std::string("records ") + (records ? "identical" : "differ") + ", summaries " +
             (summaries ? "identical" : "differ") + ", config round-trip " + (round_trip ? "identical" : "differs");
    return records && summaries && round_trip;
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion(1, "worked profile oracle", worked_profile);
    criterion(2, "rule-oracle equivalence", oracle);
    criterion(3, "Black's property", black);
    criterion(4, "Condorcet existence", existence);
    criterion(5, "noise tuning", noise);
    criterion(6, "statistic formulas", formulas);
    criterion(7, "directional collapse", collapse);
    criterion(8, "determinism", determinism);
    const auto seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in " << fmt(seconds)
              << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
