#pragma once

#include "tomobell/density_matrix.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tomobell {

/// Shortest "%.12g" rendering used in every CSV and JSON output.
std::string format_number(double v);

/// Writes to a temporary file in the target directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Header line plus one comma-separated row per entry, numbers at 12 significant digits.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

/// {"cutoff", "modes", "trace_deficit", "entries": [[row, col, re, im], ...]}
nlohmann::json density_matrix_to_json(const DensityMatrix& rho);

/// Throws ConfigError on malformed input, DimensionError on out-of-range indices.
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

/// Arithmetic expression over numbers and `pi` with + - * / and parentheses,
/// e.g. "pi/2", "-3pi/4", "3*pi/4".  Throws ConfigError on malformed input.
double parse_angle(const std::string& text);

/// "start:stop:step" (inclusive of stop within half a step), "a,b,c" or "{a,b,c}",
/// each entry parsed with parse_angle().  Throws ConfigError on malformed input.
std::vector<double> parse_values(const std::string& text);

/// "key=value,key=value" with values parsed by parse_angle().
std::map<std::string, double> parse_assignments(const std::string& text);

} // namespace tomobell
