#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "heliocast/errors.hpp"

namespace heliocast {

/// UTC instant as seconds since the Unix epoch.
using UtcTime = std::int64_t;

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Calendar ops are supported for years 1600..2999 (proleptic Gregorian).
inline constexpr UtcTime kMinSupportedTime = -11676096000LL;  // 1600-01-01T00:00Z
inline constexpr UtcTime kMaxSupportedTime = 32503679999LL;   // 2999-12-31T23:59:59Z

struct CivilTime {
    int year;
    int month;   // 1..12
    int day;     // 1..31
    int hour;    // 0..23
    int minute;  // 0..59
    int second;  // 0..59
};

namespace detail {

inline void check_supported(UtcTime t) {
    if (t < kMinSupportedTime || t > kMaxSupportedTime) {
        throw RangeError("timestamp outside supported calendar range: " + std::to_string(t));
    }
}

inline std::chrono::sys_days to_sys_days(UtcTime t) {
    // floor division so pre-epoch instants land on the right civil day
    std::int64_t d = t / kSecondsPerDay;
    if (t % kSecondsPerDay < 0) --d;
    return std::chrono::sys_days(std::chrono::days(d));
}

}  // namespace detail

inline CivilTime to_civil(UtcTime t) {
    detail::check_supported(t);
    const auto days = detail::to_sys_days(t);
    const std::chrono::year_month_day ymd(days);
    std::int64_t sod = t - std::chrono::duration_cast<std::chrono::seconds>(
                               days.time_since_epoch())
                               .count();
    return CivilTime{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day())),
                     int(sod / 3600), int((sod / 60) % 60), int(sod % 60)};
}

inline UtcTime from_civil(const CivilTime& c) {
    using namespace std::chrono;
    const year_month_day ymd{year(c.year), month(unsigned(c.month)), day(unsigned(c.day))};
    if (!ymd.ok()) {
        throw RangeError("invalid civil date");
    }
    const sys_days days(ymd);
    UtcTime t = duration_cast<seconds>(days.time_since_epoch()).count() + c.hour * 3600 +
                c.minute * 60 + c.second;
    detail::check_supported(t);
    return t;
}

/// 1..366, proleptic Gregorian leap rules.
inline int day_of_year(UtcTime t) {
    detail::check_supported(t);
    using namespace std::chrono;
    const sys_days days = detail::to_sys_days(t);
    const year_month_day ymd(days);
    const sys_days jan1(year_month_day{ymd.year(), January, day(1)});
    return int((days - jan1).count()) + 1;
}

/// Minutes since midnight UTC, with seconds as a fraction.
inline double minutes_of_day(UtcTime t) {
    std::int64_t sod = t % kSecondsPerDay;
    if (sod < 0) sod += kSecondsPerDay;
    return double(sod) / 60.0;
}

/// Parses "YYYY-MM-DDTHH:MM[:SS]Z" (also accepts a space separator and a
/// missing trailing Z).
inline UtcTime parse_time(std::string_view s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char sep = 0;
    int n = std::sscanf(std::string(s).c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h,
                        &mi, &se);
    if (n < 6 || (sep != 'T' && sep != ' ')) {
        throw UsageError("unparseable timestamp: '" + std::string(s) + "'");
    }
    return from_civil(CivilTime{y, mo, d, h, mi, n >= 7 ? se : 0});
}

inline std::string format_time(UtcTime t) {
    const CivilTime c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

}  // namespace heliocast
