#pragma once

#include <charconv>
#include <string>

namespace trc::detail {

// Shortest decimal that parses back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace trc::detail
