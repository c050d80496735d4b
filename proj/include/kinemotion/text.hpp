#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinemotion {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

/// Splits on `sep`; empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace kinemotion
