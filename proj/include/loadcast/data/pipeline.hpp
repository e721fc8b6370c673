#pragma once

#include <string>
#include <vector>

#include "loadcast/data/clean.hpp"
#include "loadcast/data/scaler.hpp"
#include "loadcast/data/split.hpp"
#include "loadcast/data/window.hpp"

namespace loadcast::data {

/// Everything the trainer and tuner need: cleaned partitions, one scaler
/// fitted on cleaned training rows only, and windowed datasets. The
/// trainval set re-windows train+val together for the final refit.
struct PreparedData {
    std::vector<std::string> features;
    ScalerState scaler;
    std::size_t demand_col = 0;
    CleanResult train_clean, val_clean, test_clean, trainval_clean;
    WindowedDataset train, val, test, trainval;

    double demand_to_mw(double standardized) const {
        return scaler.inverse_value(standardized, demand_col);
    }
};

/// Splits by date first, then cleans each partition independently so no
/// interpolation or statistic can cross a partition boundary.
inline PreparedData prepare(const std::vector<RawRecord>& records, const SplitSpec& spec,
                            const std::vector<std::string>& features, std::size_t lookback = 3,
                            std::size_t horizon = 24) {
    PreparedData d;
    d.features = features;

    const SplitResult parts = split(records, spec);
    d.train_clean = clean(parts.train);
    d.val_clean = clean(parts.val);
    d.test_clean = clean(parts.test);
    std::vector<RawRecord> trainval_rows = parts.train;
    trainval_rows.insert(trainval_rows.end(), parts.val.begin(), parts.val.end());
    d.trainval_clean = clean(trainval_rows);

    d.scaler = fit_scaler(d.train_clean.records, features);
    const auto it = std::find(features.begin(), features.end(), "hourly_demand");
    if (it == features.end())
        throw ConfigError("prepare: feature list must include hourly_demand");
    d.demand_col = static_cast<std::size_t>(it - features.begin());

    d.train = make_windows(d.train_clean, d.scaler, features, lookback, horizon);
    d.val = make_windows(d.val_clean, d.scaler, features, lookback, horizon);
    d.test = make_windows(d.test_clean, d.scaler, features, lookback, horizon);
    d.trainval = make_windows(d.trainval_clean, d.scaler, features, lookback, horizon);
    return d;
}

}  // namespace loadcast::data
