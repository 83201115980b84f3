#pragma once

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace npisim {

using Date = std::chrono::year_month_day;

class DateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

constexpr Date make_date(int y, unsigned m, unsigned d)
{
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Strict YYYY-MM-DD parser.
inline Date parse_iso_date(std::string_view text)
{
    auto digits = [&](std::size_t pos, std::size_t n) {
        int v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') {
                throw DateError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
            }
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DateError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const Date date = make_date(digits(0, 4), static_cast<unsigned>(digits(5, 2)),
                                static_cast<unsigned>(digits(8, 2)));
    if (!date.ok()) {
        throw DateError("invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

inline std::string format_iso_date(Date date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

/// Whole days from `start` to `date`; `start` maps to 0.
inline int date_to_day(Date date, Date start)
{
    const auto diff = (std::chrono::sys_days{date} - std::chrono::sys_days{start}).count();
    if (diff < 0) {
        throw DateError("date " + format_iso_date(date) + " precedes start " + format_iso_date(start));
    }
    return static_cast<int>(diff);
}

inline Date day_to_date(int day, Date start)
{
    return Date{std::chrono::sys_days{start} + std::chrono::days{day}};
}

} // namespace npisim
