#pragma once

#include <string>

namespace uam {

/// Shortest round-trip decimal representation of a double (via
/// std::to_chars), so CSV output is exact and byte-stable across runs.
std::string format_double(double v);

void append_double(std::string& out, double v);

}  // namespace uam
