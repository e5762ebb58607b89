#pragma once

#include <filesystem>
#include <string>

#include "pwcs/core.hpp"

namespace pwcs {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Parse one numeric token; throws ParseError on junk or trailing garbage.
double parse_double(const std::string& token);

// Matrix file format shared by every tool: UTF-8 text, first line
// `# rows=<r> cols=<c>`, then one comma-separated row per line.
// store -> load round-trips bit-exactly.

void store_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

/// Column vectors are stored as single-column matrices.
void store_vector(const Vector& v, const std::filesystem::path& path);
Vector load_vector(const std::filesystem::path& path);

}  // namespace pwcs
