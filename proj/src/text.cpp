#include "dreadfuzz/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace dreadfuzz::text {

std::string to_minimal_string(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_fixed2(double value) {
    long long cents = std::llround(value * 100.0);
    const bool negative = cents < 0;
    if (negative) cents = -cents;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", negative ? "-" : "",
                  cents / 100, cents % 100);
    return buf;
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

}  // namespace dreadfuzz::text
