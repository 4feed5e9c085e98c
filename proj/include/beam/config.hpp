#pragma once

#include <string>
#include <vector>

namespace beam {

// One key = value pair from a sectioned, line-oriented config file:
//   # comment
//   [section]
//   key = value        # values may contain spaces ("grid = 32 32 32")
// Repeated keys are allowed (the field list uses them).
struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

// Both throw ConfigError with the offending line on malformed input.
std::vector<ConfigEntry> parse_config_text(const std::string& text);
std::vector<ConfigEntry> parse_config_file(const std::string& path);

// Strict numeric parsing (full token must convert); line only feeds errors.
double parse_double(const std::string& token, int line);
long long parse_int(const std::string& token, int line);

// Split a value on whitespace.
std::vector<std::string> split_tokens(const std::string& value);

}  // namespace beam
