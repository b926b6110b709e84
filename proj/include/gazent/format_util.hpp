#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace gazent {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string toShortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Fixed 12-significant-digit form used by reports and CSV outputs.
inline std::string toSig12(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

} // namespace gazent
