#include "rcv/config.hpp"

#include "rcv/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rcv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view what) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(what) + ": expected an unsigned integer, got '" +
                          std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(what) + ": expected true or false, got '" + std::string(text) +
                      "'");
}

std::optional<double> parse_optional_distance(std::string_view text, std::string_view what) {
    if (text == "off") return std::nullopt;
    return parse_double_value(text, what);
}

std::vector<LengthProbability> parse_lengths(std::string_view text) {
    std::vector<LengthProbability> lengths;
    if (trim(text).empty()) return lengths;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = trim(text.substr(start, end - start));
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("random-lengths: expected 'length:probability' items, got '" +
                              std::string(item) + "'");
        }
        lengths.push_back({parse_integer<std::size_t>(trim(item.substr(0, colon)), "random-lengths"),
                           parse_double_value(trim(item.substr(colon + 1)), "random-lengths")});
        start = end + 1;
    }
    return lengths;
}

std::string format_lengths(const std::vector<LengthProbability>& lengths) {
    std::string out;
    for (const auto& [length, p] : lengths) {
        if (!out.empty()) out += ',';
        out += std::to_string(length) + ":" + format_double(p);
    }
    return out;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : "off";
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

double parse_double_value(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(what) + ": expected a number, got '" + std::string(text) +
                          "'");
    }
    return value;
}

BehaviorSpec RunConfig::behavior() const {
    auto spec = default_spec(model, candidates);
    if (ideological_cutoff) spec.ideological_cutoff = *ideological_cutoff;
    if (abstention_cutoff) spec.abstention_cutoff = *abstention_cutoff;
    if (noise_half_width) spec.noise_half_width = *noise_half_width;
    if (random_lengths) spec.random_lengths = *random_lengths;
    spec.basis = basis;
    return spec;
}

void RunConfig::validate() const {
    if (candidates != 3 && candidates != 4) throw ConfigError("candidates must be 3 or 4");
    if (elections < 1) throw ConfigError("elections must be at least 1");
    if (voters < candidates) throw ConfigError("voters must be at least the candidate count");
    if (bins < 1) throw ConfigError("bins must be at least 1");
    if (state.empty()) throw ConfigError("state is required");
    behavior().validate(candidates);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "weights",        "state",           "flavor",           "candidates",
        "model",          "elections",       "voters",           "seed",
        "bins",           "resample-electorate", "perception-basis", "ideological-cutoff",
        "abstention-cutoff", "noise-half-width", "random-lengths"};
    return keys;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues values;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        values[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return values;
}

void apply_key_values(RunConfig& config, const KeyValues& values) {
    const auto& keys = config_keys();
    for (const auto& [key, value] : values) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (key == "weights") config.weights = value;
        else if (key == "state") config.state = value;
        else if (key == "flavor") config.flavor = flavor_from_name(value);
        else if (key == "candidates") config.candidates = parse_integer<std::size_t>(value, key);
        else if (key == "model") config.model = model_from_name(value);
        else if (key == "elections") config.elections = parse_integer<std::size_t>(value, key);
        else if (key == "voters") config.voters = parse_integer<std::size_t>(value, key);
        else if (key == "seed") config.seed = parse_integer<std::uint64_t>(value, key);
        else if (key == "bins") config.bins = parse_integer<std::size_t>(value, key);
        else if (key == "resample-electorate") config.resample_electorate = parse_bool(value, key);
        else if (key == "perception-basis") config.basis = basis_from_name(value);
        else if (key == "ideological-cutoff") config.ideological_cutoff = parse_double_value(value, key);
        else if (key == "abstention-cutoff") config.abstention_cutoff = parse_optional_distance(value, key);
        else if (key == "noise-half-width") config.noise_half_width = parse_optional_distance(value, key);
        else if (key == "random-lengths") config.random_lengths = parse_lengths(value);
    }
}

KeyValues resolved_key_values(const RunConfig& config) {
    const auto spec = config.behavior();
    return {
        {"weights", config.weights},
        {"state", config.state},
        {"flavor", std::string(flavor_name(config.flavor))},
        {"candidates", std::to_string(config.candidates)},
        {"model", std::string(model_name(config.model))},
        {"elections", std::to_string(config.elections)},
        {"voters", std::to_string(config.voters)},
        {"seed", std::to_string(config.seed)},
        {"bins", std::to_string(config.bins)},
        {"resample-electorate", config.resample_electorate ? "true" : "false"},
        {"perception-basis", std::string(basis_name(config.basis))},
        {"ideological-cutoff", format_double(spec.ideological_cutoff)},
        {"abstention-cutoff", format_optional(spec.abstention_cutoff)},
        {"noise-half-width", format_optional(spec.noise_half_width)},
        {"random-lengths", format_lengths(spec.random_lengths)},
    };
}

std::string format_key_values(const KeyValues& values) {
    std::string out;
    for (const auto& [key, value] : values) out += key + " = " + value + "\n";
    return out;
}

KeyValues load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    const auto content = text.str();
    const auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object()) {
            throw ConfigError(path.string() + " has no embedded config object");
        }
        KeyValues values;
        for (const auto& [key, value] : doc["config"].items()) {
            if (!value.is_string()) throw ConfigError("config value for '" + key + "' must be a string");
            values[key] = value.get<std::string>();
        }
        return values;
    }
    return parse_key_values(content);
}

std::string output_stem(const RunConfig& config) {
    std::string state = config.state;
    std::replace(state.begin(), state.end(), ' ', '_');
    return state + "_" + std::string(flavor_name(config.flavor)) + "_" +
           std::to_string(config.candidates) + "cands_" + std::string(model_name(config.model)) +
           "_" + std::to_string(config.seed);
}

}  // namespace rcv
