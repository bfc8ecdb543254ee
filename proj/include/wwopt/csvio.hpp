#pragma once

#include <cstdio>
#include <string>

namespace wwopt {

/// Shortest decimal form that round-trips a double (up to 17 significant
/// digits, '.' decimal point). Every numeric CSV/JSON field goes through this
/// so outputs are reproducible bit-for-bit.
inline std::string full_precision(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace wwopt
