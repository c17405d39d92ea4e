#pragma once

#include <string>

namespace cpvdw {

/// Shortest-round-trip is not required; 17 significant digits always round-trips a double.
std::string format_double(double x, int significant = 17);

/// Writes content to path via a sibling temporary file and rename.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace cpvdw
