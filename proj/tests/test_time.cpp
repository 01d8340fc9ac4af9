#include <gtest/gtest.h>

#include "heliocast/time.hpp"

using namespace heliocast;

TEST(Time, ParseFormatRoundTrip) {
    const UtcTime t = parse_time("2025-03-20T12:07:30Z");
    EXPECT_EQ(format_time(t), "2025-03-20T12:07:30Z");
    EXPECT_EQ(parse_time("2025-03-20T12:07Z"), t - 30);
    EXPECT_EQ(parse_time("2025-03-20 12:07:30"), t);
}

TEST(Time, DayOfYearCalendar) {
    EXPECT_EQ(day_of_year(parse_time("2025-01-01T00:00Z")), 1);
    EXPECT_EQ(day_of_year(parse_time("2025-12-31T23:00Z")), 365);
    // leap year, civil-calendar oracle: 31 + 29 + 1
    EXPECT_EQ(day_of_year(parse_time("2024-03-01T12:00Z")), 61);
    EXPECT_EQ(day_of_year(parse_time("2024-12-31T12:00Z")), 366);
    EXPECT_EQ(day_of_year(parse_time("2100-03-01T00:00Z")), 60);  // 2100 is not a leap year
}

TEST(Time, RangeErrors) {
    EXPECT_THROW(day_of_year(kMaxSupportedTime + 1), RangeError);
    EXPECT_THROW(day_of_year(kMinSupportedTime - 1), RangeError);
    EXPECT_THROW(parse_time("not a time"), UsageError);
    EXPECT_THROW(parse_time("2025-02-30T00:00Z"), RangeError);
}

TEST(Time, CivilRoundTrip) {
    const UtcTime t = parse_time("1999-12-31T23:59:59Z");
    const CivilTime c = to_civil(t);
    EXPECT_EQ(c.year, 1999);
    EXPECT_EQ(c.second, 59);
    EXPECT_EQ(from_civil(c), t);
    EXPECT_NEAR(minutes_of_day(t), 1439.9833, 1e-3);
}
