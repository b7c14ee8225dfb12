// io.hpp — Number formatting for round-trip-exact CSV output.

#pragma once

#include <cstdio>
#include <string>

namespace qbat::io {

// 17 significant digits, '.' decimal point, no grouping.
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace qbat::io
