#include "admatch/date.hpp"

#include "admatch/errors.hpp"

#include <cstdio>

namespace admatch {

namespace {

std::chrono::year_month_day to_ymd(std::chrono::sys_days d) {
    return std::chrono::year_month_day{d};
}

} // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw ValidationError("invalid calendar date: " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse_iso(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3 || text.size() != 10 ||
        text[4] != '-' || text[7] != '-') {
        throw ValidationError("cannot parse date '" + text + "' (expected YYYY-MM-DD)");
    }
    return Date(y, m, d);
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(days_).day()); }

int Date::weekday() const {
    // iso_encoding: Monday=1 .. Sunday=7
    const std::chrono::weekday wd{days_};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

std::string Date::to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

} // namespace admatch
