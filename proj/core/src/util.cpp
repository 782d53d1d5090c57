#include "ctdde/util.hpp"

#include <charconv>
#include <cmath>

namespace ctdde::util {

std::string fmt_double(double v) {
  if (v == 0.0) return "0";  // normalize -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool is_integer_valued(double v) { return std::rint(v) == v; }

}  // namespace ctdde::util
