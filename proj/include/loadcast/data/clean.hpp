#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/record.hpp"

namespace loadcast::data {

/// Cleaned records plus the contiguous hourly runs windowing may use.
/// Segments are [begin, end) index ranges into `records`; a new segment
/// starts wherever consecutive timestamps differ by more than one hour.
struct CleanResult {
    std::vector<RawRecord> records;
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t dropped_rows = 0;
};

namespace detail {

using OptField = std::optional<double> RawRecord::*;

struct RetainedColumn {
    const char* name;
    OptField field;
};

/// Columns kept after cleaning; precipitation is intentionally absent.
inline const std::vector<RetainedColumn>& retained_columns() {
    static const std::vector<RetainedColumn> cols = {
        {"temperature", &RawRecord::temperature},
        {"dew_point", &RawRecord::dew_point},
        {"relative_humidity", &RawRecord::relative_humidity},
        {"wind_speed", &RawRecord::wind_speed},
        {"visibility", &RawRecord::visibility},
        {"daily_peak", &RawRecord::daily_peak},
        {"hourly_demand", &RawRecord::hourly_demand},
    };
    return cols;
}

/// Fills missing cells of one column by linear interpolation in time
/// between the nearest present neighbors; boundary gaps copy the nearest
/// present value. Caller guarantees at least one present value.
inline void interpolate_column(std::vector<RawRecord>& records, OptField field) {
    const std::size_t n = records.size();
    std::size_t prev = n;  // index of last present value seen
    for (std::size_t i = 0; i < n; ++i) {
        if (!(records[i].*field)) continue;
        if (prev == n) {
            for (std::size_t j = 0; j < i; ++j) records[j].*field = *(records[i].*field);
        } else if (prev + 1 < i) {
            const double t0 = static_cast<double>(records[prev].epoch_hour);
            const double t1 = static_cast<double>(records[i].epoch_hour);
            const double v0 = *(records[prev].*field);
            const double v1 = *(records[i].*field);
            for (std::size_t j = prev + 1; j < i; ++j) {
                const double a = (static_cast<double>(records[j].epoch_hour) - t0) / (t1 - t0);
                records[j].*field = v0 + a * (v1 - v0);
            }
        }
        prev = i;
    }
    if (prev != n)
        for (std::size_t j = prev + 1; j < n; ++j) records[j].*field = *(records[prev].*field);
}

}  // namespace detail

/// Drops the precipitation column, interpolates the retained weather and
/// demand-adjacent columns, removes rows with missing hourly demand, and
/// records contiguous hourly segments. Idempotent: feeding the returned
/// records back in reproduces them.
inline CleanResult clean(const std::vector<RawRecord>& input) {
    for (std::size_t i = 1; i < input.size(); ++i)
        if (input[i].epoch_hour <= input[i - 1].epoch_hour)
            throw DataError("timestamps not strictly increasing at row " + std::to_string(i));

    if (!input.empty()) {
        for (const auto& col : detail::retained_columns()) {
            std::size_t missing = 0;
            for (const RawRecord& r : input)
                if (!(r.*(col.field))) ++missing;
            if (missing * 2 > input.size())
                throw DataError(std::string("column '") + col.name + "' is more than 50% missing (" +
                                std::to_string(missing) + " of " + std::to_string(input.size()) + ")");
        }
    }

    CleanResult out;
    out.records.reserve(input.size());
    for (const RawRecord& r : input) {
        if (!r.hourly_demand) {
            ++out.dropped_rows;
            continue;
        }
        RawRecord c = r;
        c.precipitation.reset();
        out.records.push_back(c);
    }

    for (const auto& col : detail::retained_columns()) {
        if (out.records.empty()) break;
        detail::interpolate_column(out.records, col.field);
    }

    std::size_t begin = 0;
    for (std::size_t i = 1; i <= out.records.size(); ++i) {
        if (i == out.records.size() ||
            out.records[i].epoch_hour != out.records[i - 1].epoch_hour + 1) {
            out.segments.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

}  // namespace loadcast::data
