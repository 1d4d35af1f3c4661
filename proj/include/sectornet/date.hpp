#ifndef SECTORNET_DATE_HPP_
#define SECTORNET_DATE_HPP_

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace sectornet {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD; anything else (including invalid calendar days) yields nullopt.
inline std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    for (std::size_t k : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[k] < '0' || text[k] > '9') return std::nullopt;
    }
    y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    m = static_cast<unsigned>((text[5] - '0') * 10 + (text[6] - '0'));
    d = static_cast<unsigned>((text[8] - '0') * 10 + (text[9] - '0'));
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

inline bool is_weekday(const Date& date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

inline Date next_day(const Date& date) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{1}};
}

} // namespace sectornet

#endif // SECTORNET_DATE_HPP_
