#pragma once

#include <cstdio>
#include <string>

namespace atomq::fmt {

/// Text that round-trips a double exactly.
inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace atomq::fmt
