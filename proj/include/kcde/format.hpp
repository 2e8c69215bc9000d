#pragma once

#include <charconv>
#include <string>

namespace kcde {

/// Shortest decimal representation that round-trips the double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace kcde
