#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loadcast/common.hpp"

namespace loadcast::data {

/// Civil/epoch conversions (proleptic Gregorian). days_from_civil and
/// civil_from_days follow Howard Hinnant's public-domain algorithms.
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

/// Day of week with 0 = Monday .. 6 = Sunday.
inline int weekday_from_days(std::int64_t z) {
    return static_cast<int>(z >= -3 ? (z + 3) % 7 : (z + 4) % 7 + 6);
}

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

/// One hourly observation. Weather and demand cells may be absent in raw
/// files; calendar fields are always present.
struct RawRecord {
    std::int64_t epoch_hour = 0;  // hours since 1970-01-01T00:00
    int year = 0;
    int quarter = 0;
    int month = 0;
    int week_of_year = 0;
    int day_of_year = 0;
    int hour_of_day = 0;
    int day_of_week = 0;   // 0 = Monday .. 6 = Sunday
    int day_type = 0;      // 0 = working day, 1 = weekend or holiday
    int state_holiday = 0; // 0/1 flag
    std::optional<double> temperature;
    std::optional<double> dew_point;
    std::optional<double> relative_humidity;
    std::optional<double> wind_speed;
    std::optional<double> visibility;
    std::optional<double> precipitation;
    std::optional<double> daily_peak;
    std::optional<double> hourly_demand;
};

/// Fixed CSV column names. Order below is the canonical write order; readers
/// accept any column order but require exactly these names.
inline const std::array<std::string, 18>& schema_columns() {
    static const std::array<std::string, 18> cols = {
        "timestamp",     "year",          "quarter",
        "month",         "week_of_year",  "day_of_year",
        "hour_of_day",   "day_of_week",   "day_type",
        "state_holiday", "temperature",   "dew_point",
        "relative_humidity", "wind_speed", "visibility",
        "precipitation", "daily_peak",    "hourly_demand",
    };
    return cols;
}

/// Derives every calendar field of `r` from its epoch_hour.
inline void fill_calendar(RawRecord& r) {
    const std::int64_t day = (r.epoch_hour >= 0 ? r.epoch_hour : r.epoch_hour - 23) / 24;
    const CivilDate cd = civil_from_days(day);
    r.year = cd.year;
    r.month = static_cast<int>(cd.month);
    r.quarter = (r.month - 1) / 3 + 1;
    r.day_of_year = static_cast<int>(day - days_from_civil(cd.year, 1, 1)) + 1;
    r.hour_of_day = static_cast<int>(r.epoch_hour - day * 24);
    r.day_of_week = weekday_from_days(day);
    // ISO-like week number: week 1 starts on the year's first day; enough for
    // a feature column, not a full ISO-8601 week computation.
    r.week_of_year = (r.day_of_year - 1) / 7 + 1;
}

}  // namespace loadcast::data
