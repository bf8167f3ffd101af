#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace diracpack {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

} // namespace diracpack
