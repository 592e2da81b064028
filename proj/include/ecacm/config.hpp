#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ecacm/harness.hpp"

namespace ecacm::config {

// Unknown key or unparsable value.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Keys match the CLI long flags without dashes; '_' and '-' are
// interchangeable. Lists are comma separated. "rules" also accepts
// "all-canonical"; "format" is a subset of csv,json,svg; "classical",
// "kink-filter" and "pbm" take true/false/yes/no/1/0.
void apply_setting(harness::ExperimentConfig& config, std::string_view key, std::string_view value);

// One "key = value" per line; blank lines and '#' comments ignored.
void load_file(harness::ExperimentConfig& config, const std::filesystem::path& path);

std::string dump(const harness::ExperimentConfig& config);

}  // namespace ecacm::config
