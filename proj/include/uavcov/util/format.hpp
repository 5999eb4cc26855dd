#pragma once

#include <charconv>
#include <string>

namespace uavcov::util {

/// Locale-independent shortest form with at most `digits` significant digits.
inline std::string format_number(double v, int digits = 12) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

}  // namespace uavcov::util
