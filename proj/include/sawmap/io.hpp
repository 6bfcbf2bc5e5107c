#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sawmap/time_series.hpp"

namespace sawmap {

using json = nlohmann::json;

/// 17 significant digits: enough to round-trip any double, so equal values
/// always print identically.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// One JSON scalar per cell keeps integer and real columns distinguishable
/// in both output formats.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void add_row(std::vector<json> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("Table: row width does not match columns");
        rows.push_back(std::move(row));
    }
};

namespace detail {

inline std::string csv_cell(const json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

}  // namespace detail

inline void write_table_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << detail::csv_cell(row[c]);
        }
        out << '\n';
    }
}

inline json table_to_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    return rows;
}

/// Header matches StepRecord::value_names; rows cover t >= 1 only, so a
/// zero-step run writes just the header.
inline void write_series_csv(const TimeSeries& series, std::ostream& out) {
    out << 't';
    for (const char* name : StepRecord::value_names) out << ',' << name;
    out << '\n';
    for (const StepRecord& r : series.records) {
        if (r.t < 1) continue;
        out << r.t;
        for (double v : r.values()) out << ',' << format_double(v);
        out << '\n';
    }
}

inline void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = detail::open_output(path);
    write_series_csv(series, out);
}

inline json series_to_json(const TimeSeries& series) {
    json records = json::array();
    for (const StepRecord& r : series.records) {
        if (r.t < 1) continue;
        json obj = json::object();
        obj["t"] = r.t;
        const auto vals = r.values();
        for (std::size_t c = 0; c < vals.size(); ++c) obj[StepRecord::value_names[c]] = vals[c];
        records.push_back(std::move(obj));
    }
    return json{{"params",
                 {{"n_q", series.params.n_q},
                  {"K", series.params.K},
                  {"L", series.params.L}}},
                {"noise",
                 {{"epsilon", series.noise.epsilon},
                  {"seed", series.noise.seed},
                  {"realization_id", series.noise.realization_id},
                  {"noisy_swaps", series.noise.noisy_swaps}}},
                {"records", std::move(records)}};
}

inline void write_series_json(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = detail::open_output(path);
    out << series_to_json(series).dump(2) << '\n';
}

/// Plot-ready (t, C) pairs, one comma-separated pair per line.
inline void write_two_column(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = detail::open_output(path);
    out << "t,C\n";
    for (const StepRecord& r : series.records) {
        if (r.t < 1) continue;
        out << r.t << ',' << format_double(r.C) << '\n';
    }
}

inline void write_table(const Table& table, const std::filesystem::path& path,
                        const std::string& format) {
    std::ofstream out = detail::open_output(path);
    if (format == "csv")
        write_table_csv(table, out);
    else if (format == "json")
        out << table_to_json(table).dump(2) << '\n';
    else
        throw std::invalid_argument("write_table: unknown format " + format);
}

/// FNV-1a over a canonical JSON dump; stable across platforms.
inline std::uint64_t fnv1a_64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace sawmap
