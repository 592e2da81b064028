#include "ecacm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ecacm/errors.hpp"
#include "ecacm/output.hpp"

namespace ecacm::config {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    return value;
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size())
        throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

}  // namespace

void apply_setting(harness::ExperimentConfig& config, std::string_view raw_key, std::string_view raw_value) {
    std::string key(trim(raw_key));
    std::replace(key.begin(), key.end(), '_', '-');
    const auto value = trim(raw_value);

    if (key == "rules") {
        if (value == "all-canonical" || value == "all") {
            config.rules = eca::canonical_rules();
            return;
        }
        std::vector<int> rules;
        for (auto item : split(value)) {
            const int r = parse_integer<int>(key, item);
            if (r < 0 || r > 255) throw ConfigError("rules: " + std::to_string(r) + " outside [0, 255]");
            rules.push_back(r);
        }
        if (rules.empty()) throw ConfigError("rules: empty list");
        config.rules = std::move(rules);
    } else if (key == "width") {
        config.width = parse_integer<std::size_t>(key, value);
    } else if (key == "tmax" || key == "t-max") {
        config.t_max = parse_integer<std::size_t>(key, value);
    } else if (key == "window-l" || key == "l") {
        config.window_l = parse_integer<int>(key, value);
    } else if (key == "seeds") {
        std::vector<std::uint64_t> seeds;
        for (auto item : split(value)) seeds.push_back(parse_integer<std::uint64_t>(key, item));
        if (seeds.empty()) throw ConfigError("seeds: empty list");
        config.seeds = std::move(seeds);
    } else if (key == "chi2-alpha") {
        config.chi2_alpha = parse_double(key, value);
    } else if (key == "out") {
        if (value.empty()) throw ConfigError("out: empty path");
        config.out_dir = std::string(value);
    } else if (key == "format") {
        harness::Formats f{false, false, false};
        for (auto item : split(value)) {
            if (item == "csv") f.csv = true;
            else if (item == "json") f.json = true;
            else if (item == "svg") f.svg = true;
            else throw ConfigError("format: unknown format '" + std::string(item) + "'");
        }
        config.formats = f;
    } else if (key == "classical") {
        config.classical = parse_bool(key, value);
    } else if (key == "kink-filter") {
        config.kink_filter = parse_bool(key, value);
    } else if (key == "pbm") {
        config.pbm = parse_bool(key, value);
    } else if (key == "futures") {
        if (value == "chained") config.futures = harness::FuturesEstimator::Chained;
        else if (value == "direct") config.futures = harness::FuturesEstimator::Direct;
        else throw ConfigError("futures: expected chained or direct, got '" + std::string(value) + "'");
    } else if (key == "schedule") {
        std::vector<std::size_t> sched;
        if (value != "default")
            for (auto item : split(value)) sched.push_back(parse_integer<std::size_t>(key, item));
        config.schedule = std::move(sched);
    } else if (key == "threads") {
        config.threads = parse_integer<unsigned>(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

void load_file(harness::ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v(line);
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(config, v.substr(0, eq), v.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::string dump(const harness::ExperimentConfig& config) {
    std::ostringstream os;
    std::vector<std::string> formats;
    if (config.formats.csv) formats.emplace_back("csv");
    if (config.formats.json) formats.emplace_back("json");
    if (config.formats.svg) formats.emplace_back("svg");
    os << "rules = " << join(config.rules) << '\n'
       << "width = " << config.width << '\n'
       << "tmax = " << config.t_max << '\n'
       << "window-l = " << config.window_l << '\n'
       << "seeds = " << join(config.seeds) << '\n'
       << "chi2-alpha = " << output::format_number(config.chi2_alpha) << '\n'
       << "out = " << config.out_dir.string() << '\n'
       << "format = " << join(formats) << '\n'
       << "classical = " << (config.classical ? "true" : "false") << '\n'
       << "kink-filter = " << (config.kink_filter ? "true" : "false") << '\n'
       << "pbm = " << (config.pbm ? "true" : "false") << '\n'
       << "futures = " << (config.futures == harness::FuturesEstimator::Chained ? "chained" : "direct") << '\n'
       << "schedule = " << (config.schedule.empty() ? std::string("default") : join(config.schedule)) << '\n'
       << "threads = " << config.threads << '\n';
    return os.str();
}

}  // namespace ecacm::config
