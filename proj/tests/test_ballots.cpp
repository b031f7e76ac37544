#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rcv/ballots.hpp"
#include "rcv/cli.hpp"
#include "rcv/error.hpp"

#include <numeric>
#include <random>

using namespace rcv;

TEST_CASE("ranking rejects repeats and overflow") {
    Ranking r{0, 1};
    CHECK_THROWS_AS(r.push_back(1), std::invalid_argument);
    Ranking full;
    for (CandidateIndex c = 0; c < kMaxCandidates; ++c) full.push_back(c);
    CHECK_THROWS_AS(full.push_back(9), std::invalid_argument);
    CHECK(r.position_of(1) == 1);
    CHECK(r.position_of(4) == 2);
    CHECK(r.valid_for(2));
    CHECK_FALSE(r.valid_for(1));
    CHECK_FALSE(Ranking{}.valid_for(3));
    full.truncate(2);
    CHECK(full == Ranking{0, 1});
}

TEST_CASE("profile merges duplicate types and drops empty ones") {
    const PreferenceProfile p(3, {{{0, 1}, 2}, {{2}, 0}, {{1}, 1}, {{0, 1}, 3}});
    REQUIRE(p.ballots().size() == 2);
    CHECK(p.ballots()[0] == BallotType{{0, 1}, 5});
    CHECK(p.ballots()[1] == BallotType{{1}, 1});
    CHECK(p.total() == 6);
    CHECK_THROWS(PreferenceProfile(2, {{{0, 2}, 1}}));
}

TEST_CASE("worked profile text parses to nine types and 480 ballots") {
    const auto named = parse_profile(example_profile_text());
    CHECK(named.names == std::vector<std::string>{"A", "B", "C"});
    CHECK(named.profile.candidate_count() == 3);
    CHECK(named.profile.ballots().size() == 9);
    CHECK(named.profile.total() == 480);
}

TEST_CASE("profile text errors") {
    CHECK_THROWS_AS(parse_profile("A,B\n5: A>A>B\n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,B\n0: A>B\n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,B\n-2: A>B\n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,B\n2: A>D\n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,B\n2: \n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,A\n2: A\n"), DataError);
    CHECK_THROWS_AS(parse_profile("A,B\nx: A\n"), DataError);
}

TEST_CASE("profile text and CSV round-trip") {
    const auto named = parse_profile(example_profile_text());
    const auto again = parse_profile(serialize_profile(named));
    CHECK(again.names == named.names);
    CHECK(again.profile == named.profile);
    const auto csv = profile_to_csv(named);
    CHECK(csv.rfind("count,ranking\n", 0) == 0);
    CHECK(profile_from_csv(csv, named.names).profile == named.profile);
}

TEST_CASE("first-place tallies") {
    const auto p = parse_profile(example_profile_text()).profile;
    CHECK(first_place_tally(p) == std::vector<std::uint64_t>{180, 170, 130});
    CHECK(first_place_tally(p, {true, true, false}) == std::vector<std::uint64_t>{230, 240, 0});
    CHECK_THROWS_AS(first_place_tally(p, {false, false, false}), std::invalid_argument);
    CHECK_THROWS_AS(first_place_tally(p, {true, true}), std::invalid_argument);
    CHECK(first_place_tally(PreferenceProfile(3, {})) == std::vector<std::uint64_t>{0, 0, 0});
}

TEST_CASE("pairwise matrix for a single ballot") {
    const auto m = pairwise_matrix(PreferenceProfile(2, {{{0, 1}, 1}}));
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(1, 0) == 0);
}

TEST_CASE("full tally sums to the ballot count") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + trial % 4;
        std::vector<BallotType> ballots;
        for (int t = 0; t < 6; ++t) {
            std::vector<CandidateIndex> order(k);
            std::iota(order.begin(), order.end(), CandidateIndex{0});
            std::shuffle(order.begin(), order.end(), gen);
            order.resize(1 + gen() % k);
            ballots.push_back({Ranking(order), 1 + gen() % 50});
        }
        const PreferenceProfile p(k, ballots);
        const auto tally = first_place_tally(p);
        CHECK(std::accumulate(tally.begin(), tally.end(), std::uint64_t{0}) == p.total());
    }
}
