#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/clean.hpp"
#include "loadcast/data/scaler.hpp"
#include "loadcast/forecast/model.hpp"

namespace loadcast::forecast {

struct ForecastPoint {
    std::int64_t epoch_hour = 0;
    double actual_mw = 0.0;
    double predicted_mw = 0.0;
};

/// Smallest start index whose full lookback+horizon span stays inside one
/// contiguous segment.
inline std::size_t first_feasible_start(const data::CleanResult& data, std::size_t lookback,
                                        std::size_t horizon) {
    for (const auto& seg : data.segments)
        if (seg.second - seg.first >= lookback + horizon) return seg.first + lookback;
    throw DataError("no contiguous span of " + std::to_string(lookback + horizon) +
                    " hours in the data");
}

/// Forecasts the model's horizon starting at record index `start`: inputs
/// are the lookback hours before `start`, outputs are paired with the
/// actual demand at hours [start, start+horizon), both in MW. The whole
/// span must lie inside one contiguous segment.
inline std::vector<ForecastPoint> rolling_forecast(const ForecastModel& m,
                                                   const data::CleanResult& data,
                                                   const data::ScalerState& scaler,
                                                   const std::vector<std::string>& features,
                                                   std::size_t start) {
    const std::size_t lookback = m.cfg.lookback_steps;
    const std::size_t horizon = m.cfg.horizon;
    if (start < lookback || start + horizon > data.records.size())
        throw UsageError("rolling_forecast: start index " + std::to_string(start) +
                         " out of range for lookback " + std::to_string(lookback) +
                         " and horizon " + std::to_string(horizon));
    const std::size_t begin = start - lookback;
    const bool contiguous = std::any_of(
        data.segments.begin(), data.segments.end(),
        [&](const auto& seg) { return seg.first <= begin && start + horizon <= seg.second; });
    if (!contiguous)
        throw DataError("rolling_forecast: window [" + std::to_string(begin) + ", " +
                        std::to_string(start + horizon) + ") crosses a data gap");

    const auto demand_it = std::find(features.begin(), features.end(), "hourly_demand");
    if (demand_it == features.end())
        throw ConfigError("rolling_forecast: feature list must include hourly_demand");
    const std::size_t demand_col = static_cast<std::size_t>(demand_it - features.begin());
    if (scaler.columns() != features.size())
        throw ConfigError("rolling_forecast: scaler/feature column mismatch");

    nn::Matrix window(lookback, features.size());
    for (std::size_t t = 0; t < lookback; ++t)
        for (std::size_t f = 0; f < features.size(); ++f)
            window(t, f) = scaler.transform_value(
                data::feature_value(data.records[begin + t], features[f]), f);

    const std::vector<double> pred = predict(m, window);
    std::vector<ForecastPoint> out(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const data::RawRecord& r = data.records[start + h];
        out[h].epoch_hour = r.epoch_hour;
        out[h].actual_mw = *r.hourly_demand;
        out[h].predicted_mw = scaler.inverse_value(pred[h], demand_col);
    }
    return out;
}

}  // namespace loadcast::forecast
