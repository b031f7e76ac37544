#pragma once

#include "rcv/config.hpp"
#include "rcv/engine.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcv {

// Output schemas.
//
// Records CSV (version 1), one row per election in index order:
//   election, degenerate (0/1), slate (positions joined by ';'),
//   then for each rule in plurality, irv, minimax, bucklin, borda order:
//   <rule>_winner, <rule>_position, <rule>_distance,
//   then condorcet_exists (0/1), bullet_rate, abstention_rate, median_voter.
// Doubles use the shortest text that reads back exactly; undefined values are empty.
//
// Summary JSON (version 1): see summary_to_json.

inline constexpr int kRecordsSchemaVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;

std::string records_csv_header();
std::string record_csv_row(const ElectionRecord& record);

/// Throws DataError on malformed rows.
std::vector<ElectionRecord> parse_records_csv(std::string_view text);

nlohmann::ordered_json summary_to_json(const RunSummary& summary, const KeyValues& config);

/// Pretty-printed JSON with a trailing newline; the on-disk summary format.
std::string summary_text(const RunSummary& summary, const KeyValues& config);

struct SummaryFile {
    KeyValues config;
    RunSummary summary;
};

/// Throws DataError when required fields are missing.
SummaryFile summary_from_json(const nlohmann::json& doc);

struct ComparisonTables {
    std::string distances;    // model × rule grid of average distances per state
    std::string state_stats;  // rates and distribution moments per state
    std::string comparison;   // one row per run with the derived comparison metrics
};

ComparisonTables comparison_tables(std::span<const SummaryFile> runs);

}  // namespace rcv
