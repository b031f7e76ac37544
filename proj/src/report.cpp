#include "rcv/report.hpp"

#include "rcv/error.hpp"
#include "rcv/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace rcv {

namespace {

std::string format_optional_double(double value) {
    return std::isnan(value) ? std::string() : format_double(value);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto at = line.find(sep, start);
        fields.push_back(line.substr(start, at == std::string::npos ? std::string::npos : at - start));
        if (at == std::string::npos) break;
        start = at + 1;
    }
    return fields;
}

double read_double(const std::string& text, std::size_t line_no) {
    if (text.empty()) return kNaN;
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("records line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return value;
}

long long read_integer(const std::string& text, std::size_t line_no) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw DataError("records line " + std::to_string(line_no) + ": bad integer '" + text + "'");
    }
    return value;
}

bool read_flag(const std::string& text, std::size_t line_no) {
    if (text == "0") return false;
    if (text == "1") return true;
    throw DataError("records line " + std::to_string(line_no) + ": expected 0 or 1");
}

template <typename T>
T required(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw DataError(std::string("summary is missing '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("summary field '") + key + "': " + e.what());
    }
}

double json_double(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw DataError(std::string("summary is missing '") + key + "'");
    const auto& v = doc.at(key);
    if (v.is_null()) return kNaN;
    if (!v.is_number()) throw DataError(std::string("summary field '") + key + "' is not a number");
    return v.get<double>();
}

}  // namespace

std::string records_csv_header() {
    std::string header = "election,degenerate,slate";
    for (auto rule : kAllRules) {
        const std::string name(rule_name(rule));
        header += "," + name + "_winner," + name + "_position," + name + "_distance";
    }
    header += ",condorcet_exists,bullet_rate,abstention_rate,median_voter";
    return header;
}

std::string record_csv_row(const ElectionRecord& record) {
    std::string row = std::to_string(record.index);
    row += record.degenerate ? ",1," : ",0,";
    for (std::size_t i = 0; i < record.slate.size(); ++i) {
        if (i) row += ';';
        row += format_double(record.slate[i]);
    }
    for (const auto& result : record.rules) {
        row += ',' + std::to_string(result.winner);
        row += ',' + format_optional_double(result.position);
        row += ',' + format_optional_double(result.distance);
    }
    row += record.condorcet_exists ? ",1" : ",0";
    row += ',' + format_optional_double(record.bullet_rate);
    row += ',' + format_optional_double(record.abstention_rate);
    row += ',' + format_optional_double(record.median_voter);
    return row;
}

std::vector<ElectionRecord> parse_records_csv(std::string_view text) {
    std::vector<ElectionRecord> records;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    const std::size_t expected = 3 + 3 * kRuleCount + 4;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != records_csv_header()) throw DataError("unexpected records header");
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != expected) {
            throw DataError("records line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected) + " fields");
        }
        ElectionRecord record;
        record.index = static_cast<std::uint64_t>(read_integer(f[0], line_no));
        record.degenerate = read_flag(f[1], line_no);
        if (!f[2].empty()) {
            for (const auto& p : split(f[2], ';')) record.slate.push_back(read_double(p, line_no));
        }
        for (std::size_t r = 0; r < kRuleCount; ++r) {
            auto& result = record.rules[r];
            result.winner = static_cast<int>(read_integer(f[3 + 3 * r], line_no));
            result.position = read_double(f[4 + 3 * r], line_no);
            result.distance = read_double(f[5 + 3 * r], line_no);
        }
        const std::size_t tail = 3 + 3 * kRuleCount;
        record.condorcet_exists = read_flag(f[tail], line_no);
        record.bullet_rate = read_double(f[tail + 1], line_no);
        record.abstention_rate = read_double(f[tail + 2], line_no);
        record.median_voter = read_double(f[tail + 3], line_no);
        records.push_back(std::move(record));
    }
    if (line_no == 0) throw DataError("records file is empty");
    return records;
}

nlohmann::ordered_json summary_to_json(const RunSummary& summary, const KeyValues& config) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSummarySchemaVersion;
    doc["records_schema_version"] = kRecordsSchemaVersion;
    auto cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config) cfg[key] = value;
    doc["config"] = std::move(cfg);
    doc["election_count"] = summary.election_count;
    doc["degenerate_count"] = summary.degenerate_count;
    doc["condorcet_fraction"] = summary.condorcet_fraction;
    doc["median_bullet_rate"] = summary.median_bullet_rate;
    doc["median_abstention_rate"] = summary.median_abstention_rate;
    doc["median_voter"] = summary.median_voter;
    if (summary.distribution) {
        const auto embedded = embed_state(*summary.distribution);
        doc["distribution"] = {{"mean", summary.distribution->mean},
                               {"variance", summary.distribution->variance},
                               {"symmetrized_mean", embedded.mean},
                               {"analytic_median", summary.analytic_median.value_or(kNaN)}};
    }
    doc["histogram"] = {{"min", kAxisMin}, {"max", kAxisMax}, {"bins", summary.bins}};
    auto rules = nlohmann::ordered_json::object();
    for (auto rule : kAllRules) {
        const auto& r = summary.rule(rule);
        rules[std::string(rule_name(rule))] = {{"average_distance", r.average_distance},
                                               {"histogram", r.histogram}};
    }
    doc["rules"] = std::move(rules);
    const auto rd = relative_difference(summary.rule(Rule::irv).average_distance,
                                        summary.rule(Rule::minimax).average_distance);
    doc["relative_difference_irv_minimax"] = rd ? nlohmann::ordered_json(*rd) : nlohmann::ordered_json(nullptr);
    return doc;
}

std::string summary_text(const RunSummary& summary, const KeyValues& config) {
    return summary_to_json(summary, config).dump(2) + "\n";
}

SummaryFile summary_from_json(const nlohmann::json& doc) {
    SummaryFile file;
    if (!doc.contains("config") || !doc["config"].is_object()) {
        throw DataError("summary has no config object");
    }
    for (const auto& [key, value] : doc["config"].items()) {
        if (!value.is_string()) throw DataError("summary config values must be strings");
        file.config[key] = value.get<std::string>();
    }
    auto& s = file.summary;
    s.election_count = required<std::uint64_t>(doc, "election_count");
    s.degenerate_count = required<std::uint64_t>(doc, "degenerate_count");
    s.condorcet_fraction = json_double(doc, "condorcet_fraction");
    s.median_bullet_rate = json_double(doc, "median_bullet_rate");
    s.median_abstention_rate = json_double(doc, "median_abstention_rate");
    s.median_voter = json_double(doc, "median_voter");
    if (doc.contains("distribution")) {
        const auto& d = doc["distribution"];
        s.distribution = Moments{json_double(d, "mean"), json_double(d, "variance")};
        s.analytic_median = json_double(d, "analytic_median");
    }
    s.bins = required<std::size_t>(required<nlohmann::json>(doc, "histogram"), "bins");
    const auto rules = required<nlohmann::json>(doc, "rules");
    for (auto rule : kAllRules) {
        const auto name = std::string(rule_name(rule));
        if (!rules.contains(name)) throw DataError("summary has no entry for rule " + name);
        auto& r = s.rules[static_cast<std::size_t>(rule)];
        r.average_distance = json_double(rules[name], "average_distance");
        r.histogram = required<std::vector<std::uint64_t>>(rules[name], "histogram");
    }
    return file;
}

ComparisonTables comparison_tables(std::span<const SummaryFile> runs) {
    using GroupKey = std::tuple<std::string, std::string, std::string>;
    std::map<GroupKey, std::map<std::size_t, const SummaryFile*>> groups;
    for (const auto& run : runs) {
        const auto get = [&](const char* key) {
            const auto it = run.config.find(key);
            if (it == run.config.end()) throw DataError(std::string("summary config lacks ") + key);
            return it->second;
        };
        const auto model = model_from_name(get("model"));
        groups[{get("state"), get("flavor"), get("candidates")}]
              [static_cast<std::size_t>(model)] = &run;
    }

    ComparisonTables tables;
    std::string& dist = tables.distances;
    dist = "state,flavor,candidates,rule";
    for (auto m : kAllModels) dist += "," + std::string(model_name(m));
    dist += "\n";
    tables.state_stats =
        "state,flavor,candidates,abstention_rate,bullet_rate_ideological,bullet_rate_random,"
        "distribution_mean,distribution_variance,median_voter,analytic_median\n";
    std::string& cmp = tables.comparison;
    cmp = "state,flavor,candidates,model";
    for (auto r : kAllRules) cmp += "," + std::string(rule_name(r));
    cmp += ",relative_difference,relative_change,symmetrized_mean,variance,most_moderating\n";

    for (const auto& [key, by_model] : groups) {
        const auto& [state, flavor, k] = key;
        const std::string prefix = state + "," + flavor + "," + k;
        const auto find = [&](Model m) -> const SummaryFile* {
            const auto it = by_model.find(static_cast<std::size_t>(m));
            return it == by_model.end() ? nullptr : it->second;
        };

        for (auto rule : kAllRules) {
            dist += prefix + "," + std::string(rule_name(rule));
            for (auto m : kAllModels) {
                const auto* run = find(m);
                dist += ",";
                if (run) dist += format_ratio(run->summary.rule(rule).average_distance);
            }
            dist += "\n";
        }

        const auto* any = by_model.begin()->second;
        const auto rate = [&](Model m, double RunSummary::*field) {
            const auto* run = find(m);
            return run ? format_ratio(run->summary.*field) : std::string();
        };
        std::string moments = ",,";
        if (any->summary.distribution) {
            moments = format_ratio(any->summary.distribution->mean) + "," +
                      format_ratio(any->summary.distribution->variance);
        }
        tables.state_stats += prefix + "," +
                              rate(Model::abstention, &RunSummary::median_abstention_rate) + "," +
                              rate(Model::ideological_truncation, &RunSummary::median_bullet_rate) +
                              "," + rate(Model::random_truncation, &RunSummary::median_bullet_rate) +
                              "," + moments + "," + format_ratio(any->summary.median_voter) + "," +
                              (any->summary.analytic_median
                                   ? format_ratio(*any->summary.analytic_median)
                                   : std::string()) +
                              "\n";

        std::optional<double> baseline;
        if (const auto* ti = find(Model::theoretical_ideal)) {
            baseline = relative_difference(ti->summary.rule(Rule::irv).average_distance,
                                           ti->summary.rule(Rule::minimax).average_distance);
        }
        for (auto m : kAllModels) {
            const auto* run = find(m);
            if (!run) continue;
            const auto& s = run->summary;
            cmp += prefix + "," + std::string(model_name(m));
            RuleAverages averages;
            for (auto rule : kAllRules) {
                averages[static_cast<std::size_t>(rule)] = s.rule(rule).average_distance;
                cmp += "," + format_ratio(s.rule(rule).average_distance);
            }
            const auto rd = relative_difference(s.rule(Rule::irv).average_distance,
                                                s.rule(Rule::minimax).average_distance);
            std::optional<double> change;
            if (baseline && rd) change = relative_change(*baseline, *rd);
            cmp += "," + format_ratio(rd) + "," + format_ratio(change);
            if (s.distribution) {
                const auto e = embed_state(*s.distribution);
                cmp += "," + format_ratio(e.mean) + "," + format_ratio(e.variance);
            } else {
                cmp += ",,";
            }
            cmp += "," + std::string(rule_name(most_moderating(averages, 3))) + "\n";
        }
    }
    return tables;
}

}  // namespace rcv
