#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/record.hpp"

namespace loadcast::data {

/// Date-based split. Rows through train_end_hour form the training span,
/// whose chronologically last val_fraction becomes validation; rows after
/// it through test_end_hour are test.
struct SplitSpec {
    std::int64_t train_end_hour = 0;  // inclusive
    double val_fraction = 0.25;
    std::int64_t test_end_hour = 0;  // inclusive

    void validate() const {
        if (!(val_fraction > 0.0 && val_fraction < 1.0))
            throw ConfigError("split: val_fraction must be in (0, 1)");
        if (train_end_hour >= test_end_hour)
            throw ConfigError("split: train_end must precede test_end");
    }
};

/// Parses "YYYY-MM-DD" to the epoch hour of that day's final hour (23:00),
/// so date bounds are inclusive of the whole day.
inline std::int64_t end_of_day_hour(const std::string& date) {
    int y = 0, m = 0, d = 0, consumed = 0;
    if (std::sscanf(date.c_str(), "%4d-%2d-%2d%n", &y, &m, &d, &consumed) != 3 ||
        consumed != static_cast<int>(date.size()) || m < 1 || m > 12 || d < 1 || d > 31)
        throw ConfigError("split: expected date 'YYYY-MM-DD', got '" + date + "'");
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d)) * 24 + 23;
}

inline SplitSpec split_spec_from_dates(const std::string& train_end, const std::string& test_end,
                                       double val_fraction = 0.25) {
    SplitSpec spec;
    spec.train_end_hour = end_of_day_hour(train_end);
    spec.test_end_hour = end_of_day_hour(test_end);
    spec.val_fraction = val_fraction;
    spec.validate();
    return spec;
}

struct SplitResult {
    std::vector<RawRecord> train;
    std::vector<RawRecord> val;
    std::vector<RawRecord> test;
};

inline SplitResult split(const std::vector<RawRecord>& records, const SplitSpec& spec) {
    spec.validate();
    std::vector<RawRecord> fit_span;
    SplitResult out;
    for (const RawRecord& r : records) {
        if (r.epoch_hour <= spec.train_end_hour)
            fit_span.push_back(r);
        else if (r.epoch_hour <= spec.test_end_hour)
            out.test.push_back(r);
    }
    const std::size_t n = fit_span.size();
    const std::size_t val_count = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * spec.val_fraction));
    if (n == 0 || val_count == 0 || val_count >= n)
        throw ConfigError("split: training span of " + std::to_string(n) +
                          " rows cannot host a " + std::to_string(spec.val_fraction) +
                          " validation fraction");
    if (out.test.empty()) throw ConfigError("split: empty test partition");
    const std::size_t train_count = n - val_count;
    out.train.assign(fit_span.begin(), fit_span.begin() + static_cast<std::ptrdiff_t>(train_count));
    out.val.assign(fit_span.begin() + static_cast<std::ptrdiff_t>(train_count), fit_span.end());
    return out;
}

}  // namespace loadcast::data
