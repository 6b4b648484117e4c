#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace specid::detail {

// Shortest round-trip decimal representation.
std::string format_double(double v);
double parse_double(std::string_view s);
long parse_int(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

// Reads the next line that is neither empty nor a '#' comment.
bool next_data_line(std::istream& in, std::string& line);

}  // namespace specid::detail
