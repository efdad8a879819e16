#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aitsde/harness.hpp"

namespace aitsde {

// Flat key=value configuration. Later entries override earlier ones, so a
// file can be overlaid with command-line flags by appending.
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

// Parses a config file: one key=value per line, '#' comments, blank lines
// ignored. Throws ConfigError with the offending line number.
KeyValueList load_config_file(const std::filesystem::path& path);

struct BuiltConfig {
    ExperimentConfig config;
    std::vector<std::string> warnings;  // non-fatal, e.g. regime caveats
};

// Materializes an ExperimentConfig from key=value pairs. A "preset" key
// (example1|example2|example3) loads a built-in parameter set; explicit
// keys override it. Without a preset, all model parameters are required.
// Model parameters are validated; an Inadmissible regime is fatal and a
// CriticalHalfOnly regime produces a warning.
BuiltConfig build_config(const KeyValueList& entries);

// Keys understood by build_config, in canonical order.
const std::vector<std::string>& known_config_keys();

// Serializes a config back to key=value lines (used for the manifest echo;
// feeding them back into build_config reproduces the run).
KeyValueList config_echo(const ExperimentConfig& cfg);

}  // namespace aitsde
