#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nlocch/field.hpp"

namespace nlocch {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
/// Strict full-string parse; throws std::invalid_argument on trailing garbage.
double parse_double(const std::string& text);

/// NLOCCH-FIELD v1 snapshot: one text header line
///   "NLOCCH-FIELD v1 dim=<n> points=<p1,...> extent=<e1,...>\n"
/// followed by the values as little-endian IEEE-754 doubles, row-major.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);

void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

}  // namespace nlocch
