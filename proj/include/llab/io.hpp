#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace llab {

/// 17 significant digits, the CSV float format.
std::string format_g17(double v);
/// Shortest decimal that parses back to exactly v.
std::string format_shortest(double v);

/// Strict parsers: the whole token must be consumed. Throw ParameterError.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes text to a file, replacing it. Throws std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace llab
