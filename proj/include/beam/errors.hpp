#pragma once

#include <stdexcept>
#include <string>

namespace beam {

// Malformed or invalid configuration input; carries the offending line.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Integration or solver breakdown (non-finite state, adaptive failure, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (too few particles, zero-extent bunch, ...).
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace beam
