#pragma once

#include "rcv/behavior.hpp"
#include "rcv/spatial.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcv {

inline constexpr std::size_t kDefaultElections = 100'000;
inline constexpr std::size_t kDefaultBins = 50;

/// A fully specified batch. Defaults reproduce the published setup.
struct RunConfig {
    std::string weights = "fixtures/weights.csv";
    std::string state;
    Flavor flavor = Flavor::bimodal;
    std::size_t candidates = 4;
    Model model = Model::theoretical_ideal;
    std::size_t elections = kDefaultElections;
    std::size_t voters = kDefaultVoters;
    std::uint64_t seed = 1;
    std::size_t bins = kDefaultBins;
    bool resample_electorate = false;

    // Overrides on top of the model's published parameters. "off" disables a stage.
    std::optional<double> ideological_cutoff;
    std::optional<std::optional<double>> abstention_cutoff;
    std::optional<std::optional<double>> noise_half_width;
    std::optional<std::vector<LengthProbability>> random_lengths;
    PerceptionBasis basis = PerceptionBasis::perceived;

    /// Model defaults for this slate size with overrides applied.
    BehaviorSpec behavior() const;

    /// Throws ConfigError on inconsistent values.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Every key accepted in config files and on the command line.
const std::vector<std::string>& config_keys();

/// Reads `key = value` lines; '#' starts a comment. Throws ConfigError.
KeyValues parse_key_values(std::string_view text);

/// Applies recognised keys to `config`. Throws ConfigError on unknown keys or bad values.
void apply_key_values(RunConfig& config, const KeyValues& values);

/// Canonical, fully resolved key/value form. Feeding it back through
/// apply_key_values reproduces an equivalent config.
KeyValues resolved_key_values(const RunConfig& config);

std::string format_key_values(const KeyValues& values);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
double parse_double_value(std::string_view text, std::string_view what);

/// Loads a config file: either `key = value` text or a summary JSON carrying
/// a "config" object.
KeyValues load_config_file(const std::filesystem::path& path);

/// `{state}_{flavor}_{k}cands_{model}_{seed}` with spaces in the state replaced by '_'.
std::string output_stem(const RunConfig& config);

}  // namespace rcv
