#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace rqtraj {

// 17 significant digits: round-trip exact for 64-bit doubles and
// locale-independent, so identical runs produce byte-identical files.
inline std::string float17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string int_str(long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace rqtraj
