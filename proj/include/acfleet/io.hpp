#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace acfleet::io {

/// Splits one CSV line on commas. No quoting support; the formats used here
/// are purely numeric.
std::vector<std::string> split_csv_line(std::string_view line);

/// Strict numeric parse of a whole field; throws std::invalid_argument.
double parse_double(std::string_view field, std::string_view context);
long long parse_int(std::string_view field, std::string_view context);

/// Shortest round-trippable decimal form, locale independent.
std::string format_double(double v);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace acfleet::io
