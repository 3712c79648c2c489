#pragma once

#include <charconv>
#include <string>

namespace topofilter {

// Shortest round-trip decimal form; locale independent.
inline std::string shortest(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

inline std::string fixed(double value, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
  return {buf, res.ptr};
}

}  // namespace topofilter
