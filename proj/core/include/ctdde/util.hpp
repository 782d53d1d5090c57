#pragma once

#include <string>

namespace ctdde::util {

/// Shortest decimal string that round-trips to the same double.
std::string fmt_double(double v);

bool is_integer_valued(double v);

}  // namespace ctdde::util
