#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tcsaea::csv {

/// Shortest decimal form that parses back to the same double. NaN is "nan".
std::string number(double v);
std::string number(std::size_t v);

/// Quotes the field if it contains a comma, quote or newline.
std::string field(std::string_view s);

/// Joins already-formatted fields with commas.
std::string row(const std::vector<std::string>& fields);

/// Splits one line (RFC 4180 quoting).
std::vector<std::string> split(std::string_view line);

/// Throws InvalidArgument if `s` is not a complete number.
double parse_double(std::string_view s);

/// Writes through a temporary file and a rename. Creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tcsaea::csv
