#pragma once

#include <charconv>
#include <string>

namespace segeval {

/// Shortest decimal string that round-trips to the same double.
/// Locale-independent, '.' decimal point.
inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace segeval
