#include "anomcast/dates.hpp"

#include <cctype>
#include <cstdio>

#include "anomcast/errors.hpp"

namespace anomcast {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Date parse_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !all_digits(text, 0, 4) || !all_digits(text, 5, 7) || !all_digits(text, 8, 10)) {
        throw ParseError("invalid ISO-8601 date: '" + text + "'");
    }
    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));

    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{unsigned(d.month)},
                             std::chrono::day{unsigned(d.day)}};
    if (!ymd.ok()) {
        throw ParseError("non-existent calendar date: '" + text + "'");
    }
    return d;
}

std::string to_iso_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Date add_days(const Date& d, int n) {
    using namespace std::chrono;
    const year_month_day ymd{d.to_sys_days() + days{n}};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

}  // namespace anomcast
