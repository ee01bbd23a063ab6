#include "epiwave/date.hpp"

#include "epiwave/errors.hpp"

#include <cstdio>

namespace epiwave {

namespace {

bool all_digits(std::string_view s)
{
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return !s.empty();
}

int to_int(std::string_view s)
{
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

} // namespace

Date parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
        !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2))) {
        throw ParseError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{to_int(text.substr(0, 4))},
                                          std::chrono::month{static_cast<unsigned>(to_int(text.substr(5, 2)))},
                                          std::chrono::day{static_cast<unsigned>(to_int(text.substr(8, 2)))}};
    if (!ymd.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'");
    return Date{ymd};
}

std::string format_date(Date d)
{
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace epiwave
