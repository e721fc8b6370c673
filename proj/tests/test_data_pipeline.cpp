#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "loadcast/data/clean.hpp"
#include "loadcast/data/csv.hpp"
#include "loadcast/data/pipeline.hpp"
#include "loadcast/data/record.hpp"
#include "loadcast/data/scaler.hpp"
#include "loadcast/data/split.hpp"
#include "loadcast/data/synthetic.hpp"
#include "loadcast/data/window.hpp"
#include "loadcast/rng.hpp"

using namespace loadcast;
using namespace loadcast::data;

namespace {

// Record with every cell present so clean() keeps it unless told otherwise.
RawRecord full_record(std::int64_t hour, double demand) {
    RawRecord r;
    r.epoch_hour = hour;
    fill_calendar(r);
    r.temperature = 10.0;
    r.dew_point = 5.0;
    r.relative_humidity = 60.0;
    r.wind_speed = 8.0;
    r.visibility = 20.0;
    r.daily_peak = demand;
    r.hourly_demand = demand;
    return r;
}

std::string csv_text(const std::vector<RawRecord>& records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

}  // namespace

TEST_CASE("civil date conversions") {
    REQUIRE(days_from_civil(1970, 1, 1) == 0);
    REQUIRE(days_from_civil(2017, 1, 1) == 17167);
    REQUIRE(weekday_from_days(0) == 3);      // 1970-01-01 was a Thursday
    REQUIRE(weekday_from_days(17167) == 6);  // 2017-01-01 was a Sunday

    SeededRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t z = static_cast<std::int64_t>(rng.index(80000)) - 20000;
        const CivilDate cd = civil_from_days(z);
        REQUIRE(days_from_civil(cd.year, cd.month, cd.day) == z);
    }

    REQUIRE(is_leap_year(2016));
    REQUIRE_FALSE(is_leap_year(2017));
    REQUIRE_FALSE(is_leap_year(1900));
    REQUIRE(is_leap_year(2000));
}

TEST_CASE("fill_calendar derives every field from the timestamp") {
    RawRecord r;
    r.epoch_hour = days_from_civil(2017, 3, 15) * 24 + 7;
    fill_calendar(r);
    REQUIRE(r.year == 2017);
    REQUIRE(r.month == 3);
    REQUIRE(r.quarter == 1);
    REQUIRE(r.day_of_year == 74);
    REQUIRE(r.hour_of_day == 7);
    REQUIRE(r.day_of_week == 2);  // Wednesday
    REQUIRE(r.week_of_year == 11);
}

TEST_CASE("csv survives a write/read round trip with missing cells") {
    std::vector<RawRecord> records;
    records.push_back(full_record(1000, 500.25));
    records.push_back(full_record(1001, 501.5));
    records[1].temperature.reset();
    records[1].precipitation = 2.125;
    records.push_back(full_record(1002, 0.125));
    records[2].hourly_demand.reset();

    std::istringstream in(csv_text(records));
    const auto back = read_csv(in);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(back[i].epoch_hour == records[i].epoch_hour);
        REQUIRE(back[i].day_of_week == records[i].day_of_week);
        REQUIRE(back[i].temperature == records[i].temperature);
        REQUIRE(back[i].precipitation == records[i].precipitation);
        REQUIRE(back[i].hourly_demand == records[i].hourly_demand);
    }
}

TEST_CASE("csv accepts any column order") {
    std::istringstream in(
        "hourly_demand,timestamp,year,quarter,month,week_of_year,day_of_year,hour_of_day,"
        "day_of_week,day_type,state_holiday,temperature,dew_point,relative_humidity,"
        "wind_speed,visibility,precipitation,daily_peak\n"
        "750.5,2017-06-01T13:00:00,2017,2,6,22,152,13,3,0,0,21.5,12.0,55.0,9.0,24.0,,810.0\n");
    const auto records = read_csv(in);
    REQUIRE(records.size() == 1);
    REQUIRE(*records[0].hourly_demand == 750.5);
    REQUIRE(records[0].epoch_hour == days_from_civil(2017, 6, 1) * 24 + 13);
    REQUIRE_FALSE(records[0].precipitation.has_value());
}

TEST_CASE("csv header and cell validation") {
    auto read_text = [](const std::string& text) {
        std::istringstream in(text);
        return read_csv(in);
    };
    const std::string good_header =
        "timestamp,year,quarter,month,week_of_year,day_of_year,hour_of_day,day_of_week,"
        "day_type,state_holiday,temperature,dew_point,relative_humidity,wind_speed,"
        "visibility,precipitation,daily_peak,hourly_demand";
    const std::string good_row =
        "2017-06-01T13:00:00,2017,2,6,22,152,13,3,0,0,21.5,12.0,55.0,9.0,24.0,,810.0,750.5";

    REQUIRE_THROWS_AS(read_text(""), DataError);
    REQUIRE_THROWS_AS(read_text("timestamp,bogus\n"), DataError);                // unknown
    REQUIRE_THROWS_AS(read_text(good_header + ",timestamp\n"), DataError);      // duplicate
    REQUIRE_THROWS_AS(read_text("timestamp,year\n"), DataError);                // missing
    REQUIRE_THROWS_AS(read_text(good_header + "\n" + good_row + ",9\n"), DataError);

    std::string bad_time = good_row;
    bad_time.replace(bad_time.find("13:00:00"), 8, "13:30:00");
    REQUIRE_THROWS_AS(read_text(good_header + "\n" + bad_time + "\n"), DataError);

    std::string bad_value = good_row;
    bad_value.replace(bad_value.find("21.5"), 4, "warm");
    REQUIRE_THROWS_AS(read_text(good_header + "\n" + bad_value + "\n"), DataError);

    std::string negative = good_row;
    negative.replace(negative.find("750.5"), 5, "-10.0");
    REQUIRE_THROWS_AS(read_text(good_header + "\n" + negative + "\n"), DataError);

    REQUIRE_THROWS_AS(load_csv("/nonexistent/path.csv"), DataError);
}

TEST_CASE("clean interpolates interior gaps linearly and copies at edges") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 9; ++i) records.push_back(full_record(100 + i, 500.0));
    records[0].temperature = 10.0;
    records[1].temperature.reset();
    records[2].temperature.reset();
    records[3].temperature.reset();
    records[4].temperature = 20.0;  // rows 5..8 keep their fixture value
    records[0].wind_speed.reset();  // leading edge copies the next present value
    records[1].wind_speed = 7.0;

    const CleanResult c = clean(records);
    REQUIRE(c.records.size() == 9);
    REQUIRE(*c.records[1].temperature == Catch::Approx(12.5));
    REQUIRE(*c.records[2].temperature == Catch::Approx(15.0));
    REQUIRE(*c.records[3].temperature == Catch::Approx(17.5));
    REQUIRE(*c.records[0].wind_speed == 7.0);
    REQUIRE(c.segments.size() == 1);
    REQUIRE(c.dropped_rows == 0);
}

TEST_CASE("clean interpolates in time, not in row index, across demand gaps") {
    // Hour 2 has no demand and is dropped. Temperature known at hours 1 and
    // 4; hour 3 sits two thirds of the way between them in time even though
    // it is only one retained row after hour 1.
    std::vector<RawRecord> records;
    for (int h : {0, 1, 2, 3, 4, 5, 6}) records.push_back(full_record(h, 600.0));
    records[2].hourly_demand.reset();
    records[0].temperature.reset();
    records[1].temperature = 10.0;
    records[2].temperature.reset();
    records[3].temperature.reset();
    records[4].temperature = 16.0;  // rows 5 and 6 keep their fixture value

    const CleanResult c = clean(records);
    REQUIRE(c.records.size() == 6);
    REQUIRE(c.dropped_rows == 1);
    REQUIRE(*c.records[2].temperature == Catch::Approx(14.0));  // hour 3
    REQUIRE(c.segments ==
            std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {2, 6}});
}

TEST_CASE("clean drops precipitation and is idempotent") {
    SyntheticConfig cfg;
    cfg.hours = 300;
    cfg.seed = 5;
    cfg.demand_missing_rate = 0.02;
    cfg.temp_missing_rate = 0.01;
    const auto raw = generate_synthetic(cfg);

    const CleanResult once = clean(raw);
    for (const RawRecord& r : once.records) {
        REQUIRE_FALSE(r.precipitation.has_value());
        REQUIRE(r.hourly_demand.has_value());
        REQUIRE(r.temperature.has_value());
    }
    const CleanResult twice = clean(once.records);
    REQUIRE(csv_text(once.records) == csv_text(twice.records));
    REQUIRE(twice.dropped_rows == 0);
    REQUIRE(once.segments == twice.segments);
}

TEST_CASE("clean rejects unusable input") {
    std::vector<RawRecord> unordered{full_record(10, 1.0), full_record(10, 2.0)};
    REQUIRE_THROWS_AS(clean(unordered), DataError);

    std::vector<RawRecord> mostly_missing;
    for (int i = 0; i < 10; ++i) {
        RawRecord r = full_record(i, 100.0);
        if (i < 6) r.visibility.reset();
        mostly_missing.push_back(r);
    }
    REQUIRE_THROWS_AS(clean(mostly_missing), DataError);
}

TEST_CASE("scaler computes population statistics per column") {
    const std::vector<std::vector<double>> rows{{1.0, 10.0, 7.0}, {3.0, 10.0, 7.0},
                                                {5.0, 10.0, 7.0}};
    const ScalerState s = fit_scaler(rows);
    REQUIRE(s.mean == std::vector<double>{3.0, 10.0, 7.0});
    REQUIRE(s.std_dev[0] == Catch::Approx(std::sqrt(8.0 / 3.0)));
    REQUIRE(s.std_dev[1] == 1.0);  // constant column pinned to 1
    REQUIRE(s.std_dev[2] == 1.0);

    const std::vector<double> row{4.0, 10.0, 7.0};
    const auto t = s.transform_row(row);
    REQUIRE(t[1] == 0.0);
    const auto back = s.inverse_row(t);
    for (std::size_t c = 0; c < 3; ++c) REQUIRE(back[c] == Catch::Approx(row[c]).margin(1e-12));

    REQUIRE_THROWS_AS(fit_scaler(std::vector<std::vector<double>>{}), UsageError);
    REQUIRE_THROWS_AS(fit_scaler({{1.0}, {1.0, 2.0}}), UsageError);
    REQUIRE_THROWS_AS(s.transform_row({1.0}), UsageError);
}

TEST_CASE("feature_value covers cyclic encodings and error paths") {
    RawRecord r = full_record(days_from_civil(2017, 4, 1) * 24 + 6, 700.0);
    REQUIRE(feature_value(r, "hour_sin") == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(feature_value(r, "hour_cos") == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(feature_value(r, "month_sin") == Catch::Approx(1.0).margin(1e-12));  // April
    REQUIRE(feature_value(r, "temperature") == 10.0);
    REQUIRE(feature_value(r, "day_type") == double(r.day_type));

    r.temperature.reset();
    REQUIRE_THROWS_AS(feature_value(r, "temperature"), DataError);
    REQUIRE_THROWS_AS(feature_value(r, "nonsense"), ConfigError);
}

TEST_CASE("window counts follow len - span + 1 per segment over random layouts") {
    SeededRng rng(42);
    const std::size_t lookback = 3, horizon = 5, span = lookback + horizon;
    std::vector<RawRecord> records;
    std::int64_t hour = 0;
    std::size_t expected = 0;
    for (int seg = 0; seg < 100; ++seg) {
        const std::size_t len = 1 + rng.index(40);
        for (std::size_t i = 0; i < len; ++i)
            records.push_back(full_record(hour + std::int64_t(i), 500.0 + double(seg)));
        if (len >= span) expected += len - span + 1;
        hour += std::int64_t(len) + 2 + std::int64_t(rng.index(5));  // gap of >= 2
    }
    const CleanResult c = clean(records);
    REQUIRE(c.segments.size() == 100);
    const std::vector<std::string> features{"hourly_demand"};
    const ScalerState s = fit_scaler(c.records, features);
    const WindowedDataset ds = make_windows(c, s, features, lookback, horizon);
    REQUIRE(ds.size() == expected);
}

TEST_CASE("windows stay inside one segment and never look ahead") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 20; ++i) records.push_back(full_record(i, 100.0 + i));
    for (int i = 0; i < 15; ++i) records.push_back(full_record(100 + i, 500.0 + i));
    const CleanResult c = clean(records);
    REQUIRE(c.segments.size() == 2);

    const std::vector<std::string> features{"hourly_demand"};
    const ScalerState s = fit_scaler(c.records, features);
    const std::size_t lookback = 3, horizon = 6;
    const WindowedDataset ds = make_windows(c, s, features, lookback, horizon);
    REQUIRE(ds.size() == (20 - 9 + 1) + (15 - 9 + 1));

    for (std::size_t w = 0; w < ds.size(); ++w) {
        const std::size_t start = ds.first_input_index[w];
        // Whole span inside one segment
        bool inside = false;
        for (const auto& [b, e] : c.segments)
            inside = inside || (b <= start && start + lookback + horizon <= e);
        REQUIRE(inside);
        // Inputs reproduce the records strictly before the target start
        for (std::size_t t = 0; t < lookback; ++t)
            REQUIRE(ds.inputs(w, t, 0) ==
                    s.transform_value(*c.records[start + t].hourly_demand, 0));
        REQUIRE(ds.target_start_hour[w] == c.records[start + lookback].epoch_hour);
        for (std::size_t h = 0; h < horizon; ++h)
            REQUIRE(ds.targets(w, h) ==
                    s.transform_value(*c.records[start + lookback + h].hourly_demand, 0));
    }
}

TEST_CASE("make_windows argument validation") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 6; ++i) records.push_back(full_record(i, 100.0));
    const CleanResult c = clean(records);
    const std::vector<std::string> features{"hourly_demand"};
    const ScalerState s = fit_scaler(c.records, features);

    REQUIRE_THROWS_AS(make_windows(c, s, features, 0, 5), ConfigError);
    REQUIRE_THROWS_AS(make_windows(c, s, features, 3, 0), ConfigError);
    REQUIRE_THROWS_AS(make_windows(c, s, {"temperature"}, 3, 5), ConfigError);
    REQUIRE_THROWS_AS(make_windows(c, s, features, 3, 24), DataError);  // too short
}

TEST_CASE("split honors dates and the validation fraction") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 192; ++i) records.push_back(full_record(i, 100.0));  // 8 days from epoch

    SplitSpec spec;
    spec.train_end_hour = 95;   // end of day 4
    spec.test_end_hour = 191;   // end of day 8
    spec.val_fraction = 0.25;
    const SplitResult parts = split(records, spec);
    REQUIRE(parts.train.size() == 72);
    REQUIRE(parts.val.size() == 24);
    REQUIRE(parts.test.size() == 96);
    REQUIRE(parts.train.back().epoch_hour < parts.val.front().epoch_hour);
    REQUIRE(parts.val.back().epoch_hour == 95);
    REQUIRE(parts.test.front().epoch_hour == 96);

    SplitSpec bad = spec;
    bad.val_fraction = 0.0;
    REQUIRE_THROWS_AS(split(records, bad), ConfigError);
    bad = spec;
    bad.train_end_hour = 200;
    REQUIRE_THROWS_AS(split(records, bad), ConfigError);  // train end past test end
    bad = spec;
    bad.test_end_hour = 95;
    REQUIRE_THROWS_AS(split(records, bad), ConfigError);
}

TEST_CASE("end_of_day_hour parses dates inclusively") {
    REQUIRE(end_of_day_hour("1970-01-01") == 23);
    REQUIRE(end_of_day_hour("1970-01-02") == 47);
    REQUIRE_THROWS_AS(end_of_day_hour("02-01-1970"), ConfigError);
    REQUIRE_THROWS_AS(end_of_day_hour("1970-13-01"), ConfigError);
    const SplitSpec spec = split_spec_from_dates("1970-01-03", "1970-01-05");
    REQUIRE(spec.train_end_hour == 71);
    REQUIRE(spec.test_end_hour == 119);
}

TEST_CASE("synthetic generator is deterministic and hourly") {
    SyntheticConfig cfg;
    cfg.hours = 200;
    cfg.seed = 9;
    const auto a = generate_synthetic(cfg);
    const auto b = generate_synthetic(cfg);
    REQUIRE(csv_text(a) == csv_text(b));

    cfg.seed = 10;
    const auto c = generate_synthetic(cfg);
    REQUIRE(csv_text(a) != csv_text(c));

    for (std::size_t i = 1; i < a.size(); ++i)
        REQUIRE(a[i].epoch_hour == a[i - 1].epoch_hour + 1);

    cfg.hours = 47;
    REQUIRE_THROWS_AS(generate_synthetic(cfg), UsageError);
}

TEST_CASE("noise-free synthetic matches the closed form") {
    SyntheticConfig cfg;
    cfg.hours = 24 * 14;
    cfg.demand_noise_mw = 0.0;
    cfg.weather_noise_c = 0.0;
    cfg.temp_missing_rate = 0.0;
    cfg.demand_missing_rate = 0.0;
    cfg.precip_wet_rate = 0.0;
    const auto records = generate_synthetic(cfg);
    for (const RawRecord& r : records) {
        REQUIRE(*r.hourly_demand ==
                Catch::Approx(synthetic_demand(cfg, r.epoch_hour)).margin(1e-9));
        REQUIRE_FALSE(r.precipitation.has_value());
    }
    // 2017-01-01 is both a Sunday and a holiday
    REQUIRE(records[0].state_holiday == 1);
    REQUIRE(records[0].day_type == 1);
    REQUIRE(records[0].day_of_week == 6);
    // First Monday is a working day
    REQUIRE(records[24].day_of_week == 0);
    REQUIRE(records[24].day_type == 0);

    // daily_peak equals the max demand of its civil day
    for (std::size_t day = 0; day < 14; ++day) {
        double mx = 0.0;
        for (std::size_t h = 0; h < 24; ++h)
            mx = std::max(mx, *records[day * 24 + h].hourly_demand);
        for (std::size_t h = 0; h < 24; ++h)
            REQUIRE(*records[day * 24 + h].daily_peak == mx);
    }
}

TEST_CASE("prepare fits the scaler on cleaned training rows only") {
    SyntheticConfig cfg;
    cfg.hours = 2000;
    cfg.seed = 3;
    cfg.temp_missing_rate = 0.0;
    cfg.demand_missing_rate = 0.0;  // keep one segment so the tail row is windowed
    auto records = generate_synthetic(cfg);

    SplitSpec spec;
    spec.train_end_hour = records[1499].epoch_hour;
    spec.test_end_hour = records.back().epoch_hour;
    const PreparedData base = prepare(records, spec, default_features());

    // Perturbing a test-span row must not move any statistic or any window
    // built from the fitting span.
    auto perturbed = records;
    for (auto it = perturbed.rbegin(); it != perturbed.rend(); ++it)
        if (it->epoch_hour > spec.train_end_hour && it->hourly_demand) {
            *it->hourly_demand += 500.0;
            it->temperature = *it->temperature + 30.0;
            break;
        }
    const PreparedData moved = prepare(perturbed, spec, default_features());
    REQUIRE(base.scaler.mean == moved.scaler.mean);
    REQUIRE(base.scaler.std_dev == moved.scaler.std_dev);
    REQUIRE(base.train.inputs.v == moved.train.inputs.v);
    REQUIRE(base.train.targets.v == moved.train.targets.v);
    REQUIRE(base.val.inputs.v == moved.val.inputs.v);
    REQUIRE(base.test.targets.v != moved.test.targets.v);

    // Scaler equals a from-scratch fit on the cleaned training partition.
    const ScalerState direct = fit_scaler(base.train_clean.records, default_features());
    REQUIRE(base.scaler.mean == direct.mean);
    REQUIRE(base.scaler.std_dev == direct.std_dev);
}

TEST_CASE("prepare keeps partitions chronological and interpolation local") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 480; ++i) records.push_back(full_record(i, 300.0 + (i % 7)));
    // Temperature hole at the test boundary: last train+val row says 40, the
    // first present test row says -10. Cross-partition interpolation would
    // blend them; per-partition cleaning must copy -10 backwards instead.
    records[239].temperature = 40.0;
    records[240].temperature.reset();
    records[241].temperature = -10.0;

    SplitSpec spec;
    spec.train_end_hour = 239;
    spec.test_end_hour = 479;
    const PreparedData d = prepare(records, spec, default_features());

    REQUIRE(d.test_clean.records.front().epoch_hour == 240);
    REQUIRE(*d.test_clean.records.front().temperature == -10.0);

    const double last_fit = double(d.val_clean.records.back().epoch_hour);
    REQUIRE(last_fit < d.test_clean.records.front().epoch_hour);
    REQUIRE(d.train_clean.records.back().epoch_hour < d.val_clean.records.front().epoch_hour);

    // demand_to_mw inverts the target standardization exactly
    const double raw = *d.test_clean.records[5].hourly_demand;
    const double standardized = d.scaler.transform_value(raw, d.demand_col);
    REQUIRE(d.demand_to_mw(standardized) == Catch::Approx(raw).margin(1e-9));
}
