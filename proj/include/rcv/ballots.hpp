#pragma once

#include <boost/container/static_vector.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcv {

using CandidateIndex = std::uint8_t;

/// Largest candidate count a profile may carry. The simulator itself only
/// ever uses slates of 3 or 4.
inline constexpr std::size_t kMaxCandidates = 8;

/// An ordered list of distinct candidate indices, most preferred first.
/// Stored inline; copying never allocates.
class Ranking {
public:
    using Storage = boost::container::static_vector<CandidateIndex, kMaxCandidates>;

    Ranking() = default;
    Ranking(std::initializer_list<CandidateIndex> order);
    explicit Ranking(std::span<const CandidateIndex> order);

    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }
    CandidateIndex operator[](std::size_t position) const { return order_[position]; }
    CandidateIndex front() const { return order_.front(); }

    auto begin() const noexcept { return order_.begin(); }
    auto end() const noexcept { return order_.end(); }

    /// Appends a candidate. Throws std::invalid_argument on repeats or overflow.
    void push_back(CandidateIndex candidate);

    /// Shortens the ranking to its first `length` entries.
    void truncate(std::size_t length);

    bool contains(CandidateIndex candidate) const noexcept;

    /// Position of `candidate` (0-based), or size() when unranked.
    std::size_t position_of(CandidateIndex candidate) const noexcept;

    /// True iff non-empty, no repeats, and every index < candidate_count.
    bool valid_for(std::size_t candidate_count) const noexcept;

    friend bool operator==(const Ranking&, const Ranking&) = default;

private:
    Storage order_;
};

struct BallotType {
    Ranking ranking;
    std::uint64_t count = 0;

    friend bool operator==(const BallotType&, const BallotType&) = default;
};

/// A multiset of rankings over `candidate_count` candidates, grouped by type.
/// Construction validates every ranking and merges duplicate types, keeping
/// first-appearance order. Immutable afterwards.
class PreferenceProfile {
public:
    PreferenceProfile() = default;
    PreferenceProfile(std::size_t candidate_count, std::vector<BallotType> ballots);

    std::size_t candidate_count() const noexcept { return candidate_count_; }
    std::span<const BallotType> ballots() const noexcept { return ballots_; }
    std::uint64_t total() const noexcept { return total_; }

    friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

private:
    std::size_t candidate_count_ = 0;
    std::vector<BallotType> ballots_;
    std::uint64_t total_ = 0;
};

/// k×k head-to-head counts: at(x, y) = ballots ranking x above y. A ranked
/// candidate beats every unranked one; two unranked candidates are
/// incomparable.
class PairwiseMatrix {
public:
    explicit PairwiseMatrix(std::size_t candidate_count);

    std::size_t candidate_count() const noexcept { return size_; }
    std::uint64_t at(std::size_t x, std::size_t y) const { return cells_[x * size_ + y]; }
    std::uint64_t& at(std::size_t x, std::size_t y) { return cells_[x * size_ + y]; }

private:
    std::size_t size_;
    std::vector<std::uint64_t> cells_;
};

struct NamedProfile {
    std::vector<std::string> names;
    PreferenceProfile profile;
};

/// Parses the profile text format:
///
///     A,B,C
///     20: A>B>C
///     30: A
///
/// Blank lines and lines starting with '#' are ignored. Throws DataError.
NamedProfile parse_profile(std::string_view text);

/// Inverse of parse_profile.
std::string serialize_profile(const NamedProfile& named);

/// CSV form: header `count,ranking`, one row per ballot type, ranking joined
/// by '>'. Names are needed to read it back.
std::string profile_to_csv(const NamedProfile& named);
NamedProfile profile_from_csv(std::string_view csv, std::vector<std::string> names);

/// Ballots counted for their highest-ranked active candidate. Ballots ranking
/// no active candidate count for no one. Throws std::invalid_argument when
/// `active` is empty or has the wrong size.
std::vector<std::uint64_t> first_place_tally(const PreferenceProfile& profile,
                                             const std::vector<bool>& active);

/// Tally with every candidate active.
std::vector<std::uint64_t> first_place_tally(const PreferenceProfile& profile);

PairwiseMatrix pairwise_matrix(const PreferenceProfile& profile);

}  // namespace rcv
