#pragma once

#include <string>
#include <vector>

namespace loadshift::csv {

/// Splits one CSV line on commas. No quoting: none of the formats this tool
/// reads or writes quote fields. Trailing '\r' is stripped.
std::vector<std::string> split(const std::string& line);

/// Reads all lines of a file; throws UserError if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

bool parse_double(const std::string& s, double& out);

/// Shortest decimal form that round-trips a double exactly.
std::string format_exact(double v);

}  // namespace loadshift::csv
