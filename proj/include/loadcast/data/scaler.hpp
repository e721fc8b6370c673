#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/record.hpp"

namespace loadcast::data {

/// Default 12-column feature list: five weather columns, six cyclic
/// calendar encodings, and demand itself. With lookback 3 this yields the
/// 36-node input layout.
inline std::vector<std::string> default_features() {
    return {"temperature",     "dew_point",       "relative_humidity", "wind_speed",
            "visibility",      "hour_sin",        "hour_cos",          "day_of_week_sin",
            "day_of_week_cos", "month_sin",       "month_cos",         "hourly_demand"};
}

inline double feature_value(const RawRecord& r, const std::string& name) {
    constexpr double kTau = 2.0 * M_PI;
    auto need = [&](const std::optional<double>& v) {
        if (!v) throw DataError("feature '" + name + "' missing; run clean first");
        return *v;
    };
    if (name == "temperature") return need(r.temperature);
    if (name == "dew_point") return need(r.dew_point);
    if (name == "relative_humidity") return need(r.relative_humidity);
    if (name == "wind_speed") return need(r.wind_speed);
    if (name == "visibility") return need(r.visibility);
    if (name == "daily_peak") return need(r.daily_peak);
    if (name == "hourly_demand") return need(r.hourly_demand);
    if (name == "hour_sin") return std::sin(kTau * r.hour_of_day / 24.0);
    if (name == "hour_cos") return std::cos(kTau * r.hour_of_day / 24.0);
    if (name == "day_of_week_sin") return std::sin(kTau * r.day_of_week / 7.0);
    if (name == "day_of_week_cos") return std::cos(kTau * r.day_of_week / 7.0);
    if (name == "month_sin") return std::sin(kTau * (r.month - 1) / 12.0);
    if (name == "month_cos") return std::cos(kTau * (r.month - 1) / 12.0);
    if (name == "day_type") return static_cast<double>(r.day_type);
    if (name == "state_holiday") return static_cast<double>(r.state_holiday);
    throw ConfigError("unknown feature '" + name + "'");
}

inline std::vector<std::vector<double>> feature_rows(const std::vector<RawRecord>& records,
                                                     const std::vector<std::string>& features) {
    std::vector<std::vector<double>> rows;
    rows.reserve(records.size());
    for (const RawRecord& r : records) {
        std::vector<double> row;
        row.reserve(features.size());
        for (const std::string& f : features) row.push_back(feature_value(r, f));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Per-column standardization statistics. Fitted on training rows only;
/// population standard deviation, with constant columns pinned to std 1 so
/// transforms stay finite.
struct ScalerState {
    std::vector<double> mean;
    std::vector<double> std_dev;

    std::size_t columns() const { return mean.size(); }

    double transform_value(double v, std::size_t col) const {
        return (v - mean[col]) / std_dev[col];
    }
    double inverse_value(double v, std::size_t col) const {
        return v * std_dev[col] + mean[col];
    }

    std::vector<double> transform_row(const std::vector<double>& row) const {
        if (row.size() != columns())
            throw UsageError("scaler expects " + std::to_string(columns()) + " columns, got " +
                             std::to_string(row.size()));
        std::vector<double> out(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) out[c] = transform_value(row[c], c);
        return out;
    }
    std::vector<double> inverse_row(const std::vector<double>& row) const {
        if (row.size() != columns())
            throw UsageError("scaler expects " + std::to_string(columns()) + " columns, got " +
                             std::to_string(row.size()));
        std::vector<double> out(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) out[c] = inverse_value(row[c], c);
        return out;
    }
};

inline ScalerState fit_scaler(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw UsageError("fit_scaler: empty training slice");
    const std::size_t cols = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != cols) throw UsageError("fit_scaler: ragged rows");

    ScalerState s;
    s.mean.assign(cols, 0.0);
    s.std_dev.assign(cols, 0.0);
    const double n = static_cast<double>(rows.size());
    for (const auto& row : rows)
        for (std::size_t c = 0; c < cols; ++c) s.mean[c] += row[c];
    for (std::size_t c = 0; c < cols; ++c) s.mean[c] /= n;
    for (const auto& row : rows)
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = row[c] - s.mean[c];
            s.std_dev[c] += d * d;
        }
    for (std::size_t c = 0; c < cols; ++c) {
        s.std_dev[c] = std::sqrt(s.std_dev[c] / n);
        if (s.std_dev[c] == 0.0) s.std_dev[c] = 1.0;
    }
    return s;
}

inline ScalerState fit_scaler(const std::vector<RawRecord>& train,
                              const std::vector<std::string>& features) {
    return fit_scaler(feature_rows(train, features));
}

}  // namespace loadcast::data
