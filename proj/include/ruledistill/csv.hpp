#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rd {

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

/// Parses a full string as a double; throws InvalidArgument otherwise.
double parse_double(std::string_view text);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

std::string csv_line(const std::vector<std::string>& fields);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace rd
