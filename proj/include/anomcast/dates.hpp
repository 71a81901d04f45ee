#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace anomcast {

/// Calendar date. Only valid Gregorian dates can be constructed.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::chrono::sys_days to_sys_days() const {
        using namespace std::chrono;
        return sys_days{year_month_day{std::chrono::year{year},
                                       std::chrono::month{unsigned(month)},
                                       std::chrono::day{unsigned(day)}}};
    }

    /// Days since 1970-01-01; total order consistent with operator<=>.
    std::int64_t serial() const { return to_sys_days().time_since_epoch().count(); }

    /// 0 = Sunday .. 6 = Saturday.
    int weekday() const {
        return int(std::chrono::weekday{to_sys_days()}.c_encoding());
    }

    bool is_weekend() const {
        const int w = weekday();
        return w == 0 || w == 6;
    }
};

/// Parses "YYYY-MM-DD". Throws ParseError on malformed or non-existent dates.
Date parse_iso_date(const std::string& text);

/// Formats as "YYYY-MM-DD".
std::string to_iso_string(const Date& d);

/// Date shifted by n calendar days (n may be negative).
Date add_days(const Date& d, int n);

}  // namespace anomcast
