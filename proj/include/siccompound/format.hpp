#pragma once

// Deterministic number formatting for reports: 12 significant digits.

#include <cmath>
#include <cstdio>
#include <string>

namespace siccompound {

inline constexpr const char* kSchemaVersion = "v1";

/// Rounds to 12 significant digits; -0 is printed as 0.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

}  // namespace siccompound
