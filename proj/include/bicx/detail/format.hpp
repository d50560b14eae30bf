#pragma once

#include <charconv>
#include <string>

namespace bicx::detail {

// shortest decimal form that round-trips the double exactly
inline std::string fmt_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace bicx::detail
