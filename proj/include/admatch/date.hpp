#pragma once

#include <chrono>
#include <compare>
#include <string>

namespace admatch {

/// Calendar day. Thin wrapper over std::chrono::sys_days with the few
/// operations the pipeline needs (ISO parsing, weekday, month arithmetic).
class Date {
  public:
    Date() = default;
    Date(int year, unsigned month, unsigned day);

    /// Parse "YYYY-MM-DD". Throws ValidationError on malformed or
    /// non-existent dates.
    static Date parse_iso(const std::string& text);

    int year() const;
    unsigned month() const;   // 1..12
    unsigned day() const;     // 1..31
    int weekday() const;      // 0 = Monday .. 6 = Sunday

    bool is_weekend() const { return weekday() >= 5; }

    std::string to_iso() const;

    Date next() const { return Date(days_ + std::chrono::days{1}); }
    Date plus_days(long n) const { return Date(days_ + std::chrono::days{n}); }

    /// Signed day count from other to *this.
    long days_since(const Date& other) const { return (days_ - other.days_).count(); }

    auto operator<=>(const Date&) const = default;

  private:
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    std::chrono::sys_days days_{};
};

} // namespace admatch
