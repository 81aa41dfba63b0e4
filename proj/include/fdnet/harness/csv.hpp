#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fdnet/errors.hpp"

namespace fdnet::harness {

inline constexpr const char* kCurveHeader = "x,analytic,sim,sim_ci";

// Missing values are written as "nan".
struct CurveRow {
    double x = NAN;
    double analytic = NAN;
    double sim = NAN;
    double sim_ci = NAN;
};

using Curve = std::vector<CurveRow>;

// 9 significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return NAN;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("malformed number '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Header plus string cells; every row must have the header's width.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline Table read_table(std::istream& in, const std::string& source = "csv") {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " columns, got " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw ConfigError(source + ": empty CSV");
    return t;
}

inline void write_table(std::ostream& out, const Table& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

inline void write_curve(std::ostream& out, const Curve& c) {
    out << kCurveHeader << '\n';
    for (const auto& r : c)
        out << format_number(r.x) << ',' << format_number(r.analytic) << ',' << format_number(r.sim) << ','
            << format_number(r.sim_ci) << '\n';
}

inline Curve read_curve(std::istream& in, const std::string& source = "csv") {
    const Table t = read_table(in, source);
    std::string header;
    for (std::size_t i = 0; i < t.header.size(); ++i) header += (i ? "," : "") + t.header[i];
    if (header != kCurveHeader) throw ConfigError(source + ": expected header '" + kCurveHeader + "'");
    Curve c;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        try {
            c.push_back({parse_number(r[0]), parse_number(r[1]), parse_number(r[2]), parse_number(r[3])});
        } catch (const ConfigError& e) {
            throw ConfigError(source + ": row " + std::to_string(i + 1) + ": " + e.what());
        }
        if (std::isnan(c.back().x)) throw ConfigError(source + ": row " + std::to_string(i + 1) + ": missing x");
    }
    return c;
}

inline void write_curve_file(const std::string& path, const Curve& c) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    write_curve(f, c);
    if (!f) throw ConfigError("failed writing " + path);
}

inline Curve read_curve_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read " + path);
    return read_curve(f, path);
}

} // namespace fdnet::harness
