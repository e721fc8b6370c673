#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/record.hpp"

namespace loadcast::data {

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

inline DataError cell_error(std::size_t row, const std::string& col, const std::string& what) {
    return DataError("csv row " + std::to_string(row) + ", column '" + col + "': " + what);
}

inline double parse_double(const std::string& cell, std::size_t row, const std::string& col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw cell_error(row, col, "unparseable number '" + cell + "'");
    return value;
}

inline int parse_int(const std::string& cell, std::size_t row, const std::string& col) {
    int value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw cell_error(row, col, "unparseable integer '" + cell + "'");
    return value;
}

/// Accepts YYYY-MM-DD[T ]HH:MM[:SS]; minutes and seconds must be zero.
inline std::int64_t parse_timestamp(const std::string& cell, std::size_t row) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n = std::sscanf(cell.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 6 || (sep != 'T' && sep != ' '))
        throw cell_error(row, "timestamp", "expected ISO-8601 'YYYY-MM-DDTHH:MM[:SS]', got '" + cell + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23)
        throw cell_error(row, "timestamp", "out-of-range date/time in '" + cell + "'");
    if (mi != 0 || s != 0)
        throw cell_error(row, "timestamp", "sub-hour timestamps unsupported: '" + cell + "'");
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 24 + h;
}

inline std::string format_timestamp(std::int64_t epoch_hour) {
    const std::int64_t day = (epoch_hour >= 0 ? epoch_hour : epoch_hour - 23) / 24;
    const CivilDate cd = civil_from_days(day);
    const int h = static_cast<int>(epoch_hour - day * 24);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00:00", cd.year, cd.month, cd.day, h);
    return buf;
}

/// Fixed formatting keeps generated files byte-stable across runs.
inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace detail

/// Parses records from a stream. Header must contain exactly the schema
/// columns, in any order; missing cells are empty strings.
inline std::vector<RawRecord> read_csv(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line))
        throw DataError(source + ": empty file, expected a header row");
    const std::vector<std::string> header = detail::split_line(line);
    const auto& schema = schema_columns();

    std::vector<std::size_t> position(schema.size(), header.size());
    for (std::size_t h = 0; h < header.size(); ++h) {
        const auto it = std::find(schema.begin(), schema.end(), header[h]);
        if (it == schema.end())
            throw DataError(source + ": unknown column '" + header[h] + "'");
        const std::size_t idx = static_cast<std::size_t>(it - schema.begin());
        if (position[idx] != header.size())
            throw DataError(source + ": duplicate column '" + header[h] + "'");
        position[idx] = h;
    }
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (position[i] == header.size())
            throw DataError(source + ": missing column '" + schema[i] + "'");

    std::vector<RawRecord> records;
    std::size_t row = 1;  // header is row 0
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            ++row;
            continue;
        }
        const std::vector<std::string> cells = detail::split_line(line);
        if (cells.size() != header.size())
            throw DataError(source + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        auto cell = [&](std::size_t schema_idx) -> const std::string& {
            return cells[position[schema_idx]];
        };
        auto opt_cell = [&](std::size_t schema_idx, const char* name) -> std::optional<double> {
            const std::string& c = cell(schema_idx);
            if (c.empty()) return std::nullopt;
            return detail::parse_double(c, row, name);
        };

        RawRecord r;
        r.epoch_hour = detail::parse_timestamp(cell(0), row);
        r.year = detail::parse_int(cell(1), row, "year");
        r.quarter = detail::parse_int(cell(2), row, "quarter");
        r.month = detail::parse_int(cell(3), row, "month");
        r.week_of_year = detail::parse_int(cell(4), row, "week_of_year");
        r.day_of_year = detail::parse_int(cell(5), row, "day_of_year");
        r.hour_of_day = detail::parse_int(cell(6), row, "hour_of_day");
        r.day_of_week = detail::parse_int(cell(7), row, "day_of_week");
        r.day_type = detail::parse_int(cell(8), row, "day_type");
        r.state_holiday = detail::parse_int(cell(9), row, "state_holiday");
        r.temperature = opt_cell(10, "temperature");
        r.dew_point = opt_cell(11, "dew_point");
        r.relative_humidity = opt_cell(12, "relative_humidity");
        r.wind_speed = opt_cell(13, "wind_speed");
        r.visibility = opt_cell(14, "visibility");
        r.precipitation = opt_cell(15, "precipitation");
        r.daily_peak = opt_cell(16, "daily_peak");
        r.hourly_demand = opt_cell(17, "hourly_demand");
        if (r.hourly_demand && *r.hourly_demand < 0.0)
            throw detail::cell_error(row, "hourly_demand", "negative demand");
        records.push_back(r);
        ++row;
    }
    return records;
}

inline std::vector<RawRecord> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return read_csv(in, path);
}

inline void write_csv(std::ostream& out, const std::vector<RawRecord>& records) {
    const auto& schema = schema_columns();
    for (std::size_t i = 0; i < schema.size(); ++i)
        out << (i ? "," : "") << schema[i];
    out << "\n";
    auto put = [&](const std::optional<double>& v) {
        out << ",";
        if (v) out << detail::format_value(*v);
    };
    for (const RawRecord& r : records) {
        out << detail::format_timestamp(r.epoch_hour) << "," << r.year << "," << r.quarter << ","
            << r.month << "," << r.week_of_year << "," << r.day_of_year << "," << r.hour_of_day
            << "," << r.day_of_week << "," << r.day_type << "," << r.state_holiday;
        put(r.temperature);
        put(r.dew_point);
        put(r.relative_humidity);
        put(r.wind_speed);
        put(r.visibility);
        put(r.precipitation);
        put(r.daily_peak);
        put(r.hourly_demand);
        out << "\n";
    }
}

inline void save_csv(const std::string& path, const std::vector<RawRecord>& records) {
    // Write-then-rename so readers never observe a partial file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        write_csv(out, records);
        if (!out) throw DataError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace loadcast::data
