#include "rcv/cli.hpp"

#include "rcv/ballots.hpp"
#include "rcv/config.hpp"
#include "rcv/engine.hpp"
#include "rcv/error.hpp"
#include "rcv/report.hpp"
#include "rcv/rules.hpp"
#include "rcv/stats.hpp"
#include "rcv/tuning.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace rcv {

namespace fs = std::filesystem;

namespace {

constexpr const char* kExampleProfile = R"(# Three candidates, nine ballot types, 480 ballots.
A,B,C
20: A>B>C
130: A>C>B
30: A
40: B>A>C
120: B>C>A
10: B
50: C>A>B
70: C>B>A
10: C
)";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw DataError("cannot write " + path.string());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        const auto first = item.find_first_not_of(' ');
        const auto last = item.find_last_not_of(' ');
        if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
    }
    return items;
}

std::string joined_counts(const std::vector<std::uint64_t>& values,
                          const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (c) out += ' ';
        out += names[c] + "=" + std::to_string(values[c]);
    }
    return out;
}

// Flags shared by simulate, summarize and tune-noise, keyed by config key.
struct RunFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool resample = false;
    CLI::Option* resample_option = nullptr;

    void add(CLI::App& app, const std::string& key, const std::string& help) {
        options[key] = app.add_option("--" + key, values[key], help);
    }

    /// Values given on the command line, overriding `base`.
    KeyValues overlay(KeyValues base) const {
        for (const auto& [key, option] : options) {
            if (option->count() > 0) base[key] = values.at(key);
        }
        if (resample_option && resample_option->count() > 0) {
            base["resample-electorate"] = resample ? "true" : "false";
        }
        return base;
    }
};

void add_run_flags(CLI::App& app, RunFlags& flags, bool batch) {
    flags.add(app, "weights", "weights CSV (state,flavor,w1..w7)");
    flags.add(app, "state", batch ? "state label(s), comma separated" : "state label");
    flags.add(app, "flavor", "bimodal or trimodal");
    flags.add(app, "candidates", "slate size, 3 or 4");
    flags.add(app, "elections", "number of simulated elections");
    flags.add(app, "voters", "electorate size");
    flags.add(app, "seed", "master seed");
    if (!batch) return;
    flags.add(app, "model", "behavior model(s), comma separated");
    flags.add(app, "bins", "winner histogram bins");
    flags.add(app, "perception-basis", "perceived or true");
    flags.add(app, "ideological-cutoff", "override the ideological truncation cutoff");
    flags.add(app, "abstention-cutoff", "override the abstention cutoff, or 'off'");
    flags.add(app, "noise-half-width", "override the noise half-width, or 'off'");
    flags.add(app, "random-lengths", "override random truncation lengths, e.g. 1:0.34,2:0.2");
    flags.resample_option =
        app.add_flag("--resample-electorate", flags.resample, "draw a fresh electorate per election");
}

KeyValues base_values(const std::string& config_path) {
    return config_path.empty() ? KeyValues{} : load_config_file(config_path);
}

std::size_t default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_example(const std::string& profile_path, bool as_json, std::ostream& out) {
    const auto named = parse_profile(profile_path.empty() ? std::string(kExampleProfile)
                                                          : read_file(profile_path));
    const auto& p = named.profile;
    const auto& names = named.names;

    if (as_json) {
        nlohmann::ordered_json doc;
        doc["candidates"] = names;
        doc["ballots"] = p.total();
        for (auto rule : kAllRules) doc["rules"][std::string(rule_name(rule))] = audit_to_json(run_rule(rule, p), names);
        const auto cw = condorcet_winner(p);
        doc["condorcet_winner"] = cw ? nlohmann::ordered_json(names[*cw]) : nlohmann::ordered_json(nullptr);
        out << doc.dump(2) << "\n";
        return kExitOk;
    }

    out << "Profile: " << names.size() << " candidates, " << p.ballots().size()
        << " ballot types, " << p.total() << " ballots\n\n";

    const auto plurality = plurality_winner(p);
    out << "plurality  winner " << names[plurality.winner] << "  first-place "
        << joined_counts(std::get<PluralityAudit>(plurality.audit).tally, names) << "\n";

    const auto irv = irv_winner(p);
    const auto& irv_audit = std::get<IrvAudit>(irv.audit);
    out << "irv        winner " << names[irv.winner] << "\n";
    for (std::size_t r = 0; r < irv_audit.rounds.size(); ++r) {
        const auto& round = irv_audit.rounds[r];
        out << "  round " << r + 1 << ": " << joined_counts(round.tally, names)
            << " exhausted=" << round.exhausted;
        if (round.eliminated) out << "  eliminate " << names[*round.eliminated];
        out << "\n";
    }

    const auto bucklin = bucklin_winner(p);
    const auto& b_audit = std::get<BucklinAudit>(bucklin.audit);
    out << "bucklin    winner " << names[bucklin.winner] << "  threshold " << b_audit.threshold
        << "\n";
    for (std::size_t r = 0; r < b_audit.scores.size(); ++r) {
        out << "  round " << r + 1 << ": " << joined_counts(b_audit.scores[r], names) << "\n";
    }

    const auto matrix = pairwise_matrix(p);
    const auto minimax = minimax_winner(matrix);
    const auto& m_audit = std::get<MinimaxAudit>(minimax.audit);
    out << "condorcet  winner "
        << (m_audit.condorcet_winner ? names[*m_audit.condorcet_winner] : std::string("none"))
        << "\n";
    for (std::size_t x = 0; x < names.size(); ++x) {
        for (std::size_t y = x + 1; y < names.size(); ++y) {
            out << "  " << names[x] << " vs " << names[y] << ": " << matrix.at(x, y) << "-"
                << matrix.at(y, x) << "\n";
        }
    }
    out << "minimax    winner " << names[minimax.winner] << "  worst opposition "
        << joined_counts(m_audit.worst_opposition, names) << "\n";

    const auto borda = borda_winner(p);
    out << "borda      winner " << names[borda.winner] << "  points "
        << joined_counts(std::get<BordaAudit>(borda.audit).points, names) << "\n";
    return kExitOk;
}

int cmd_simulate(const KeyValues& values, std::size_t workers, const std::string& out_dir,
                 std::ostream& out) {
    const auto list = [&](const char* key, const char* fallback) {
        const auto it = values.find(key);
        auto items = split_list(it == values.end() ? fallback : it->second);
        if (items.empty()) throw ConfigError(std::string(key) + " is empty");
        return items;
    };
    const auto states = list("state", "");
    const auto flavors = list("flavor", "bimodal");
    const auto ks = list("candidates", "4");
    const auto models = list("model", "theoretical-ideal");

    std::vector<RunConfig> runs;
    for (const auto& state : states) {
        for (const auto& flavor : flavors) {
            for (const auto& k : ks) {
                for (const auto& model : models) {
                    RunConfig config;
                    auto single = values;
                    single["state"] = state;
                    single["flavor"] = flavor;
                    single["candidates"] = k;
                    single["model"] = model;
                    apply_key_values(config, single);
                    config.validate();
                    runs.push_back(std::move(config));
                }
            }
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw DataError("cannot create output directory " + out_dir);

    for (const auto& config : runs) {
        const auto rows = load_weights_csv(config.weights);
        const auto& weights = find_weights(rows, config.state, config.flavor);
        const auto stem = fs::path(out_dir) / output_stem(config);
        const auto records_path = stem.string() + ".records.csv";
        std::ofstream records(records_path, std::ios::binary);
        if (!records) throw DataError("cannot write " + records_path);
        records << records_csv_header() << "\n";
        const auto summary = run_batch(config, weights, workers, [&](const ElectionRecord& r) {
            records << record_csv_row(r) << "\n";
        });
        records.close();
        if (!records) throw DataError("failed writing " + records_path);
        const auto summary_path = stem.string() + ".summary.json";
        write_file(summary_path, summary_text(summary, resolved_key_values(config)));
        out << "wrote " << records_path << "\n" << "wrote " << summary_path << "\n";
    }
    return kExitOk;
}

int cmd_summarize_records(const KeyValues& values, const std::string& records_path,
                          const std::string& out_path, std::ostream& out) {
    RunConfig config;
    apply_key_values(config, values);
    config.validate();
    const auto records = parse_records_csv(read_file(records_path));
    auto summary = aggregate(records, config.bins);
    const auto rows = load_weights_csv(config.weights);
    const auto& weights = find_weights(rows, config.state, config.flavor);
    summary.distribution = distribution_moments(weights);
    summary.analytic_median = analytic_median(weights);
    const auto text = summary_text(summary, resolved_key_values(config));
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
    return kExitOk;
}

int cmd_summarize_tables(const std::string& dir, const std::string& out_dir, std::ostream& out) {
    if (!fs::is_directory(dir)) throw DataError(dir + " is not a directory");
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 13 && name.ends_with(".summary.json")) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw DataError("no *.summary.json files in " + dir);
    std::vector<SummaryFile> runs;
    for (const auto& path : paths) {
        try {
            runs.push_back(summary_from_json(nlohmann::json::parse(read_file(path))));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("cannot parse " + path.string() + ": " + e.what());
        }
    }
    const auto tables = comparison_tables(runs);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw DataError("cannot create output directory " + out_dir);
    write_file(fs::path(out_dir) / "distances.csv", tables.distances);
    write_file(fs::path(out_dir) / "state_stats.csv", tables.state_stats);
    write_file(fs::path(out_dir) / "comparison.csv", tables.comparison);
    out << "wrote tables for " << runs.size() << " runs to " << out_dir << "\n";
    return kExitOk;
}

int cmd_moments(const std::string& weights_path, const std::string& state,
                const std::string& flavor, std::ostream& out) {
    const auto rows = load_weights_csv(weights_path);
    out << "state,flavor,mean,variance,symmetrized_mean,analytic_median\n";
    std::optional<Flavor> wanted;
    if (!flavor.empty()) wanted = flavor_from_name(flavor);
    std::size_t printed = 0;
    for (const auto& row : rows) {
        if (!state.empty() && row.state() != state) continue;
        if (wanted && row.flavor() != *wanted) continue;
        const auto m = distribution_moments(row);
        out << row.state() << "," << flavor_name(row.flavor()) << "," << format_double(m.mean)
            << "," << format_double(m.variance) << "," << format_double(embed_state(m).mean) << ","
            << format_double(analytic_median(row)) << "\n";
        ++printed;
    }
    if (printed == 0) throw DataError("no weights rows match the requested state/flavor");
    return kExitOk;
}

int cmd_tune_noise(const KeyValues& values, const std::string& grid, std::size_t workers,
                   const std::string& out_path, std::ostream& out) {
    const auto get = [&](const char* key, const char* fallback) {
        const auto it = values.find(key);
        return it == values.end() ? std::string(fallback) : it->second;
    };
    RunConfig config;
    KeyValues known;
    for (const char* key : {"weights", "state", "flavor", "candidates", "voters", "seed"}) {
        if (values.count(key)) known[key] = values.at(key);
    }
    apply_key_values(config, known);
    if (config.state.empty()) throw ConfigError("state is required");

    NoiseTuningSetup setup;
    setup.candidates = config.candidates;
    setup.voters = config.voters;
    setup.seed = config.seed;
    setup.elections = std::stoul(get("elections", "1000"));

    std::vector<double> half_widths;
    if (grid.empty()) {
        for (int i = 0; i <= 50; ++i) half_widths.push_back(i / 100.0);
    } else {
        for (const auto& item : split_list(grid)) {
            half_widths.push_back(parse_double_value(item, "half-widths"));
        }
    }
    for (double h : half_widths) {
        if (!(h >= 0 && h <= 0.5)) {
            throw ConfigError("half-width " + format_double(h) + " outside [0, 0.5]");
        }
    }

    const auto rows = load_weights_csv(config.weights);
    const auto& weights = find_weights(rows, config.state, config.flavor);
    const auto table = tune_noise(weights, setup, half_widths, workers);

    std::ostringstream csv;
    csv << "half_width,ballots,changed,changed_fraction,mean_kendall_tau\n";
    for (const auto& row : table) {
        csv << format_double(row.half_width) << "," << row.ballots << "," << row.changed << ","
            << format_double(row.changed_fraction()) << "," << format_double(row.mean_kendall_tau())
            << "\n";
    }
    if (out_path.empty()) {
        out << csv.str();
    } else {
        write_file(out_path, csv.str());
    }
    return kExitOk;
}

}  // namespace

std::string example_profile_text() { return kExampleProfile; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo comparison of ranked-choice rules on spatial electorates", "rcvsim"};
    app.require_subcommand(1);

    auto* example = app.add_subcommand("example", "run every rule on the worked 480-ballot profile");
    std::string profile_path;
    bool as_json = false;
    example->add_option("--profile", profile_path, "profile text file to use instead");
    example->add_flag("--json", as_json, "print winners and audit payloads as JSON");

    auto* simulate = app.add_subcommand("simulate", "run batches and write records + summaries");
    RunFlags sim_flags;
    std::string sim_config;
    std::string sim_out = "results";
    std::size_t sim_workers = default_workers();
    simulate->add_option("--config", sim_config, "key = value config file or a summary JSON");
    add_run_flags(*simulate, sim_flags, true);
    simulate->add_option("--workers", sim_workers, "worker threads (does not change output)");
    simulate->add_option("--out", sim_out, "output directory");

    auto* summarize = app.add_subcommand("summarize", "rebuild a summary, or build comparison tables");
    RunFlags sum_flags;
    std::string sum_config;
    std::string sum_records;
    std::string sum_tables;
    std::string sum_out;
    summarize->add_option("--config", sum_config, "config file or summary JSON of the run");
    add_run_flags(*summarize, sum_flags, true);
    auto* records_opt = summarize->add_option("--records", sum_records, "records CSV to summarize");
    auto* tables_opt =
        summarize->add_option("--tables", sum_tables, "directory of summaries to tabulate");
    records_opt->excludes(tables_opt);
    summarize->add_option("--out", sum_out, "output file (records) or directory (tables)");

    auto* moments = app.add_subcommand("moments", "distribution moments per weights row");
    std::string mom_weights = RunConfig{}.weights;
    std::string mom_state;
    std::string mom_flavor;
    moments->add_option("--weights", mom_weights, "weights CSV");
    moments->add_option("--state", mom_state, "only this state");
    moments->add_option("--flavor", mom_flavor, "only this flavor");

    auto* tune = app.add_subcommand("tune-noise", "fraction of ballots changed by perception noise");
    RunFlags tune_flags;
    std::string tune_config;
    std::string tune_grid;
    std::string tune_out;
    std::size_t tune_workers = default_workers();
    tune->add_option("--config", tune_config, "config file");
    add_run_flags(*tune, tune_flags, false);
    tune->add_option("--half-widths", tune_grid, "comma separated grid (default 0.00..0.50 by 0.01)");
    tune->add_option("--workers", tune_workers, "worker threads");
    tune->add_option("--out", tune_out, "output CSV (default stdout)");

    std::vector<std::string> argv_storage{"rcvsim"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*example) return cmd_example(profile_path, as_json, out);
        if (*simulate) {
            return cmd_simulate(sim_flags.overlay(base_values(sim_config)), sim_workers, sim_out, out);
        }
        if (*summarize) {
            if (!sum_tables.empty()) {
                return cmd_summarize_tables(sum_tables, sum_out.empty() ? sum_tables : sum_out, out);
            }
            if (sum_records.empty()) throw ConfigError("summarize needs --records or --tables");
            return cmd_summarize_records(sum_flags.overlay(base_values(sum_config)), sum_records,
                                         sum_out, out);
        }
        if (*moments) return cmd_moments(mom_weights, mom_state, mom_flavor, out);
        if (*tune) {
            return cmd_tune_noise(tune_flags.overlay(base_values(tune_config)), tune_grid,
                                  tune_workers, tune_out, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace rcv
