#include "rcv/ballots.hpp"

#include "rcv/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace rcv {

Ranking::Ranking(std::initializer_list<CandidateIndex> order) {
    for (auto c : order) push_back(c);
}

Ranking::Ranking(std::span<const CandidateIndex> order) {
    for (auto c : order) push_back(c);
}

void Ranking::push_back(CandidateIndex candidate) {
    if (order_.size() == kMaxCandidates) {
        throw std::invalid_argument("ranking longer than the candidate limit");
    }
    if (contains(candidate)) {
        throw std::invalid_argument("candidate repeated within a ranking");
    }
    order_.push_back(candidate);
}

void Ranking::truncate(std::size_t length) {
    if (length < order_.size()) order_.resize(length);
}

bool Ranking::contains(CandidateIndex candidate) const noexcept {
    return std::find(order_.begin(), order_.end(), candidate) != order_.end();
}

std::size_t Ranking::position_of(CandidateIndex candidate) const noexcept {
    return static_cast<std::size_t>(std::find(order_.begin(), order_.end(), candidate) -
                                    order_.begin());
}

bool Ranking::valid_for(std::size_t candidate_count) const noexcept {
    if (order_.empty() || order_.size() > candidate_count) return false;
    std::uint32_t seen = 0;
    for (auto c : order_) {
        if (c >= candidate_count) return false;
        const std::uint32_t bit = 1u << c;
        if (seen & bit) return false;
        seen |= bit;
    }
    return true;
}

PreferenceProfile::PreferenceProfile(std::size_t candidate_count,
                                     std::vector<BallotType> ballots)
    : candidate_count_(candidate_count) {
    if (candidate_count == 0 || candidate_count > kMaxCandidates) {
        throw std::invalid_argument("candidate count must be in 1.." +
                                    std::to_string(kMaxCandidates));
    }
    ballots_.reserve(ballots.size());
    for (auto& ballot : ballots) {
        if (!ballot.ranking.valid_for(candidate_count)) {
            throw std::invalid_argument("ranking does not fit the candidate set");
        }
        if (ballot.count == 0) continue;
        total_ += ballot.count;
        auto same = std::find_if(ballots_.begin(), ballots_.end(), [&](const BallotType& b) {
            return b.ranking == ballot.ranking;
        });
        if (same != ballots_.end()) {
            same->count += ballot.count;
        } else {
            ballots_.push_back(std::move(ballot));
        }
    }
}

PairwiseMatrix::PairwiseMatrix(std::size_t candidate_count)
    : size_(candidate_count), cells_(candidate_count * candidate_count, 0) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        parts.push_back(trim(s.substr(start, at == std::string_view::npos ? at : at - start)));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return parts;
}

std::uint64_t parse_count(std::string_view text, std::size_t line_no) {
    text = trim(text);
    if (!text.empty() && text.front() == '-') {
        throw DataError("line " + std::to_string(line_no) + ": non-positive count");
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": bad count '" +
                        std::string(text) + "'");
    }
    if (value == 0) {
        throw DataError("line " + std::to_string(line_no) + ": non-positive count");
    }
    return value;
}

Ranking parse_ranking(std::string_view text, const std::vector<std::string>& names,
                      std::size_t line_no) {
    text = trim(text);
    if (text.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": empty ranking");
    }
    Ranking ranking;
    for (auto token : split(text, '>')) {
        const auto it = std::find(names.begin(), names.end(), token);
        if (it == names.end()) {
            throw DataError("line " + std::to_string(line_no) + ": unknown candidate '" +
                            std::string(token) + "'");
        }
        const auto index = static_cast<CandidateIndex>(it - names.begin());
        if (ranking.contains(index)) {
            throw DataError("line " + std::to_string(line_no) + ": candidate '" +
                            std::string(token) + "' ranked twice");
        }
        ranking.push_back(index);
    }
    return ranking;
}

std::vector<std::string> parse_names(std::string_view header) {
    std::vector<std::string> names;
    for (auto token : split(header, ',')) {
        if (token.empty()) throw DataError("empty candidate name in header");
        if (token.find('>') != std::string_view::npos || token.find(':') != std::string_view::npos) {
            throw DataError("candidate names may not contain '>' or ':'");
        }
        if (std::find(names.begin(), names.end(), token) != names.end()) {
            throw DataError("duplicate candidate name '" + std::string(token) + "'");
        }
        names.emplace_back(token);
    }
    if (names.size() > kMaxCandidates) {
        throw DataError("too many candidates (limit " + std::to_string(kMaxCandidates) + ")");
    }
    return names;
}

void append_ranking(std::string& out, const Ranking& ranking,
                    const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (i) out += '>';
        out += names.at(ranking[i]);
    }
}

}  // namespace

NamedProfile parse_profile(std::string_view text) {
    NamedProfile result;
    std::vector<BallotType> ballots;
    bool have_header = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            result.names = parse_names(line);
            have_header = true;
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw DataError("line " + std::to_string(line_no) + ": expected 'count: ranking'");
        }
        const auto count = parse_count(line.substr(0, colon), line_no);
        auto ranking = parse_ranking(line.substr(colon + 1), result.names, line_no);
        ballots.push_back({ranking, count});
    }
    if (!have_header) throw DataError("profile has no candidate header");
    result.profile = PreferenceProfile(result.names.size(), std::move(ballots));
    return result;
}

std::string serialize_profile(const NamedProfile& named) {
    std::string out;
    for (std::size_t i = 0; i < named.names.size(); ++i) {
        if (i) out += ',';
        out += named.names[i];
    }
    out += '\n';
    for (const auto& ballot : named.profile.ballots()) {
        out += std::to_string(ballot.count);
        out += ": ";
        append_ranking(out, ballot.ranking, named.names);
        out += '\n';
    }
    return out;
}

std::string profile_to_csv(const NamedProfile& named) {
    std::string out = "count,ranking\n";
    for (const auto& ballot : named.profile.ballots()) {
        out += std::to_string(ballot.count);
        out += ',';
        append_ranking(out, ballot.ranking, named.names);
        out += '\n';
    }
    return out;
}

NamedProfile profile_from_csv(std::string_view csv, std::vector<std::string> names) {
    std::vector<BallotType> ballots;
    std::istringstream in{std::string(csv)};
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "count,ranking") throw DataError("expected header 'count,ranking'");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw DataError("line " + std::to_string(line_no) + ": expected 'count,ranking'");
        }
        const auto count = parse_count(line.substr(0, comma), line_no);
        ballots.push_back({parse_ranking(line.substr(comma + 1), names, line_no), count});
    }
    const auto k = names.size();
    return {std::move(names), PreferenceProfile(k, std::move(ballots))};
}

std::vector<std::uint64_t> first_place_tally(const PreferenceProfile& profile,
                                             const std::vector<bool>& active) {
    const auto k = profile.candidate_count();
    if (active.size() != k) throw std::invalid_argument("active set has the wrong size");
    if (std::none_of(active.begin(), active.end(), [](bool a) { return a; })) {
        throw std::invalid_argument("active candidate set is empty");
    }
    std::vector<std::uint64_t> tally(k, 0);
    for (const auto& ballot : profile.ballots()) {
        for (auto c : ballot.ranking) {
            if (active[c]) {
                tally[c] += ballot.count;
                break;
            }
        }
    }
    return tally;
}

std::vector<std::uint64_t> first_place_tally(const PreferenceProfile& profile) {
    std::vector<std::uint64_t> tally(profile.candidate_count(), 0);
    for (const auto& ballot : profile.ballots()) tally[ballot.ranking.front()] += ballot.count;
    return tally;
}

PairwiseMatrix pairwise_matrix(const PreferenceProfile& profile) {
    const auto k = profile.candidate_count();
    PairwiseMatrix matrix(k);
    for (const auto& ballot : profile.ballots()) {
        const auto& r = ballot.ranking;
        for (std::size_t i = 0; i < r.size(); ++i) {
            // Beats everything ranked below it.
            for (std::size_t j = i + 1; j < r.size(); ++j) matrix.at(r[i], r[j]) += ballot.count;
            // Beats everything left off the ballot.
            for (std::size_t y = 0; y < k; ++y) {
                if (!r.contains(static_cast<CandidateIndex>(y))) matrix.at(r[i], y) += ballot.count;
            }
        }
    }
    return matrix;
}

}  // namespace rcv
