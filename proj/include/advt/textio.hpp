// Small text-output helpers shared by the serializers.
#pragma once

#include <cstdio>
#include <string>

namespace advt {

/// Shortest 17-significant-digit form; round-trips any double exactly.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace advt
