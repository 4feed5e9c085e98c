#include "beam/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "beam/errors.hpp"

namespace beam {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError(line, "empty section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected 'key = value' or '[section]'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "empty key");
        if (value.empty()) throw ConfigError(line, "empty value for key '" + key + "'");
        if (section.empty())
            throw ConfigError(line, "key '" + key + "' outside any section");
        entries.push_back({section, key, value, line});
    }
    return entries;
}

std::vector<ConfigEntry> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

double parse_double(const std::string& token, int line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(line, "invalid number '" + token + "'");
    return v;
}

long long parse_int(const std::string& token, int line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError(line, "invalid integer '" + token + "'");
    return v;
}

std::vector<std::string> split_tokens(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace beam
