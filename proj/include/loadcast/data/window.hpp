#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/clean.hpp"
#include "loadcast/data/scaler.hpp"
#include "loadcast/nn/tensor.hpp"

namespace loadcast::data {

/// Supervised pairs: standardized feature windows and standardized demand
/// targets, with an index map back to the source series.
struct WindowedDataset {
    nn::Tensor3 inputs;             // count × lookback × features
    nn::Matrix targets;             // count × horizon, standardized demand
    std::vector<std::size_t> first_input_index;   // into the cleaned records
    std::vector<std::int64_t> target_start_hour;  // epoch hour of target[0]
    std::size_t lookback = 0;
    std::size_t horizon = 0;

    std::size_t size() const { return inputs.batch; }
};

/// Builds stride-1 windows inside each contiguous segment: inputs cover
/// hours [t-lookback, t), targets
/// cover [t, t+horizon). The demand feature's scaler column also
/// standardizes the targets, so `features` must contain "hourly_demand".
inline WindowedDataset make_windows(const CleanResult& data, const ScalerState& scaler,
                                    const std::vector<std::string>& features,
                                    std::size_t lookback = 3, std::size_t horizon = 24) {
    if (lookback == 0 || horizon == 0)
        throw ConfigError("make_windows: lookback and horizon must be positive");
    if (scaler.columns() != features.size())
        throw ConfigError("make_windows: scaler has " + std::to_string(scaler.columns()) +
                          " columns for " + std::to_string(features.size()) + " features");
    const auto demand_it = std::find(features.begin(), features.end(), "hourly_demand");
    if (demand_it == features.end())
        throw ConfigError("make_windows: feature list must include hourly_demand");
    const std::size_t demand_col = static_cast<std::size_t>(demand_it - features.begin());

    std::size_t count = 0;
    const std::size_t span = lookback + horizon;
    for (const auto& [begin, end] : data.segments) {
        const std::size_t len = end - begin;
        if (len >= span) count += len - span + 1;
    }
    if (count == 0)
        throw DataError("make_windows: no segment long enough for lookback " +
                        std::to_string(lookback) + " + horizon " + std::to_string(horizon));

    WindowedDataset ds;
    ds.lookback = lookback;
    ds.horizon = horizon;
    ds.inputs = nn::Tensor3(count, lookback, features.size());
    ds.targets = nn::Matrix(count, horizon);
    ds.first_input_index.reserve(count);
    ds.target_start_hour.reserve(count);

    std::size_t w = 0;
    for (const auto& [begin, end] : data.segments) {
        const std::size_t len = end - begin;
        if (len < span) continue;
        for (std::size_t start = begin; start + span <= end; ++start) {
            for (std::size_t t = 0; t < lookback; ++t) {
                const RawRecord& r = data.records[start + t];
                for (std::size_t f = 0; f < features.size(); ++f)
                    ds.inputs(w, t, f) = scaler.transform_value(feature_value(r, features[f]), f);
            }
            for (std::size_t h = 0; h < horizon; ++h) {
                const RawRecord& r = data.records[start + lookback + h];
                ds.targets(w, h) = scaler.transform_value(*r.hourly_demand, demand_col);
            }
            ds.first_input_index.push_back(start);
            ds.target_start_hour.push_back(data.records[start + lookback].epoch_hour);
            ++w;
        }
    }
    return ds;
}

}  // namespace loadcast::data
