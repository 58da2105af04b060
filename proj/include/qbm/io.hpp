#pragma once

#include <cstdio>
#include <string>

namespace qbm {

/// Shortest round-trippable fixed format used by every CSV writer, so that
/// identical inputs produce byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qbm
