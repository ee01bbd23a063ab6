#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace epiwave {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Throws ParseError.
Date parse_date(std::string_view text);

std::string format_date(Date d);

inline Date make_date(int y, unsigned m, unsigned d)
{
    return std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d};
}

inline int days_between(Date from, Date to) { return static_cast<int>((to - from).count()); }

} // namespace epiwave
