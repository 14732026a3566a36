// CSV ingestion of claim records and locale-independent numeric formatting.
// Plain comma-separated files with a mandatory header row; no quoting.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ektail/distributions.hpp"

namespace ektail {

// Shortest decimal that parses back to the same double.
inline std::string format_double_exact(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed significant digits for derived statistics.
inline std::string format_double(double v, int significant = 10) {
    char buf[48];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClaimRecord {
    double z = 0.0;
    std::uint8_t delta = 0;
    std::optional<int> year;
};

// Header names of the mapped columns; an empty year name means "no year".
struct CsvColumns {
    std::string z = "z";
    std::string delta = "delta";
    std::string year;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] inline void fail(const std::string& source, std::size_t row, const std::string& what) {
    throw CsvError(source + ":" + std::to_string(row) + ": " + what);
}

inline double parse_double_field(std::string_view field, const std::string& source,
                                 std::size_t row, const std::string& column) {
    const std::string_view f = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || f.empty())
        fail(source, row, "could not parse " + column + " value '" + std::string(f) + "'");
    return value;
}

inline long parse_int_field(std::string_view field, const std::string& source, std::size_t row,
                            const std::string& column) {
    const std::string_view f = trim(field);
    long value = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || f.empty())
        fail(source, row, "could not parse " + column + " value '" + std::string(f) + "'");
    return value;
}

}  // namespace detail

inline std::vector<ClaimRecord> ingest_csv(std::istream& in, const CsvColumns& columns,
                                           const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(source + ": missing header row");

    std::vector<std::string_view> fields;
    detail::split_fields(line, fields);
    std::ptrdiff_t z_col = -1, delta_col = -1, year_col = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string_view name = detail::trim(fields[i]);
        if (name == columns.z) z_col = static_cast<std::ptrdiff_t>(i);
        if (name == columns.delta) delta_col = static_cast<std::ptrdiff_t>(i);
        if (!columns.year.empty() && name == columns.year) year_col = static_cast<std::ptrdiff_t>(i);
    }
    const std::size_t width = fields.size();
    if (z_col < 0) throw CsvError(source + ": missing column '" + columns.z + "'");
    if (delta_col < 0) throw CsvError(source + ": missing column '" + columns.delta + "'");
    if (!columns.year.empty() && year_col < 0)
        throw CsvError(source + ": missing column '" + columns.year + "'");

    std::vector<ClaimRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        detail::split_fields(line, fields);
        if (fields.size() != width)
            detail::fail(source, row,
                         "expected " + std::to_string(width) + " fields, got " +
                             std::to_string(fields.size()));
        ClaimRecord rec;
        rec.z = detail::parse_double_field(fields[static_cast<std::size_t>(z_col)], source, row,
                                           "'" + columns.z + "'");
        if (!(rec.z > 0.0)) detail::fail(source, row, "'" + columns.z + "' must be positive");
        const long d = detail::parse_int_field(fields[static_cast<std::size_t>(delta_col)], source,
                                               row, "'" + columns.delta + "'");
        if (d != 0 && d != 1)
            detail::fail(source, row, "'" + columns.delta + "' must be 0 or 1");
        rec.delta = static_cast<std::uint8_t>(d);
        if (year_col >= 0)
            rec.year = static_cast<int>(detail::parse_int_field(
                fields[static_cast<std::size_t>(year_col)], source, row, "'" + columns.year + "'"));
        records.push_back(rec);
    }
    return records;
}

inline std::vector<ClaimRecord> ingest_csv(const std::string& path, const CsvColumns& columns = {}) {
    std::ifstream in(path);
    if (!in) throw CsvError(path + ": cannot open file");
    return ingest_csv(in, columns, path);
}

inline CensoredSample to_sample(const std::vector<ClaimRecord>& records) {
    CensoredSample s;
    s.z.reserve(records.size());
    s.delta.reserve(records.size());
    for (const auto& r : records) {
        s.z.push_back(r.z);
        s.delta.push_back(r.delta);
    }
    return s;
}

// Round-trip exact emission: z in shortest form, delta as 0/1.
inline void write_sample_csv(std::ostream& out, const CensoredSample& sample) {
    out << "z,delta\n";
    for (std::size_t i = 0; i < sample.size(); ++i)
        out << format_double_exact(sample.z[i]) << ',' << int(sample.delta[i]) << '\n';
}

}  // namespace ektail
