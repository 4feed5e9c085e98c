#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beam::csv {

// Shortest representation that round-trips the exact double value.
std::string cell(double v);
std::string cell(long v);
std::string cell(int v);

// Header written on construction; rows are plain comma joins (no quoting;
// the schemas contain no commas or newlines inside fields).
class Writer {
public:
    Writer(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace beam::csv
