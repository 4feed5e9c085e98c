#include "beam/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace beam::csv {

std::string cell(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string cell(long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }

Writer::Writer(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), width_(header.size()) {
    row(header);
}

void Writer::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace beam::csv
