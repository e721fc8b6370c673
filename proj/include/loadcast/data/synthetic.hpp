#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/record.hpp"
#include "loadcast/rng.hpp"

namespace loadcast::data {

/// Desk-scale stand-in for a real hourly load feed: demand is a base level
/// plus daily and weekly sinusoids, a heating/cooling term coupled to
/// temperature, a weekend/holiday drop, and Gaussian noise.
struct SyntheticConfig {
    std::size_t hours = 8760;
    std::int64_t start_hour = days_from_civil(2017, 1, 1) * 24;
    double base_mw = 1000.0;
    double daily_amp_mw = 200.0;
    double weekly_amp_mw = 60.0;
    double temp_coeff_mw = 6.0;   // MW per degree C away from comfort
    double comfort_c = 18.0;
    double weekend_drop_mw = 80.0;
    double demand_noise_mw = 20.0;
    double weather_noise_c = 1.5;
    double temp_missing_rate = 0.0003;
    double demand_missing_rate = 0.001;
    double precip_wet_rate = 0.08;  // fraction of hours with a precipitation value
    std::uint64_t seed = 0;
};

constexpr double kTau = 2.0 * M_PI;

inline bool synthetic_is_holiday(const CivilDate& d) {
    return (d.month == 1 && d.day == 1) || (d.month == 7 && d.day == 1) ||
           (d.month == 12 && d.day == 25);
}

/// Noise-free temperature: seasonal plus diurnal sinusoids.
inline double synthetic_temperature(std::int64_t epoch_hour) {
    const std::int64_t day = epoch_hour / 24;
    const CivilDate cd = civil_from_days(day);
    const int doy = static_cast<int>(day - days_from_civil(cd.year, 1, 1)) + 1;
    const int hour = static_cast<int>(epoch_hour - day * 24);
    const double seasonal = 10.0 - 16.0 * std::cos(kTau * (doy - 15) / 365.25);
    const double diurnal = 4.0 * std::sin(kTau * (hour - 9) / 24.0);
    return seasonal + diurnal;
}

/// Demand given a temperature reading. The generator feeds the noisy
/// temperature through this; with all noise amplitudes zero the output is
/// the exact closed form.
inline double synthetic_demand_given_temp(const SyntheticConfig& cfg, std::int64_t epoch_hour,
                                          double temperature) {
    const std::int64_t day = epoch_hour / 24;
    const int hour = static_cast<int>(epoch_hour - day * 24);
    const int dow = weekday_from_days(day);
    const bool off_day = dow >= 5 || synthetic_is_holiday(civil_from_days(day));
    const double daily = cfg.daily_amp_mw * std::sin(kTau * (hour - 8) / 24.0);
    const double weekly = cfg.weekly_amp_mw * std::sin(kTau * (dow * 24 + hour) / 168.0);
    const double thermal = cfg.temp_coeff_mw * std::abs(temperature - cfg.comfort_c);
    return cfg.base_mw + daily + weekly + thermal - (off_day ? cfg.weekend_drop_mw : 0.0);
}

/// Noise-free demand series, the oracle for generator tests.
inline double synthetic_demand(const SyntheticConfig& cfg, std::int64_t epoch_hour) {
    return synthetic_demand_given_temp(cfg, epoch_hour, synthetic_temperature(epoch_hour));
}

/// Generates cfg.hours consecutive hourly records. Per-row draw order is
/// fixed (temperature, wind, demand noise, precipitation, missing markers)
/// so a given seed always yields identical records.
inline std::vector<RawRecord> generate_synthetic(const SyntheticConfig& cfg) {
    if (cfg.hours < 48) throw UsageError("generate_synthetic: need at least 48 hours");
    SeededRng rng(cfg.seed);
    std::vector<RawRecord> records;
    records.reserve(cfg.hours);

    for (std::size_t i = 0; i < cfg.hours; ++i) {
        RawRecord r;
        r.epoch_hour = cfg.start_hour + static_cast<std::int64_t>(i);
        fill_calendar(r);
        const std::int64_t day = r.epoch_hour / 24;
        r.state_holiday = synthetic_is_holiday(civil_from_days(day)) ? 1 : 0;
        r.day_type = (r.day_of_week >= 5 || r.state_holiday) ? 1 : 0;

        const double temp = synthetic_temperature(r.epoch_hour) +
                            cfg.weather_noise_c * rng.normal();
        r.temperature = temp;
        r.dew_point = temp - 5.0 - 2.0 * std::sin(kTau * r.hour_of_day / 24.0);
        r.relative_humidity =
            std::clamp(70.0 - 1.5 * (temp - *r.dew_point) + 2.0 * rng.normal(), 20.0, 100.0);
        r.wind_speed = std::max(0.0, 12.0 + 6.0 * std::sin(kTau * i / 31.0) + 2.0 * rng.normal());
        r.visibility = std::clamp(24.0 + 6.0 * std::sin(kTau * i / 200.0) + rng.normal(), 1.0, 40.0);

        r.hourly_demand = synthetic_demand_given_temp(cfg, r.epoch_hour, temp) +
                          cfg.demand_noise_mw * rng.normal();

        if (rng.bernoulli(cfg.precip_wet_rate))
            r.precipitation = std::abs(rng.normal()) * 2.0;
        if (rng.bernoulli(cfg.temp_missing_rate)) r.temperature.reset();
        if (rng.bernoulli(cfg.demand_missing_rate)) r.hourly_demand.reset();
        records.push_back(r);
    }

    // Daily peak is the max of that civil day's present demand values.
    std::map<std::int64_t, double> peak;
    for (const RawRecord& r : records)
        if (r.hourly_demand) {
            auto [it, inserted] = peak.try_emplace(r.epoch_hour / 24, *r.hourly_demand);
            if (!inserted) it->second = std::max(it->second, *r.hourly_demand);
        }
    for (RawRecord& r : records) {
        const auto it = peak.find(r.epoch_hour / 24);
        if (it != peak.end()) r.daily_peak = it->second;
    }
    return records;
}

}  // namespace loadcast::data
