#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"

namespace fdnet::harness {

enum class Column { analytic, sim };

inline std::string_view to_string(Column c) { return c == Column::analytic ? "analytic" : "sim"; }

inline Column column_from_string(std::string_view s) {
    if (s == "analytic") return Column::analytic;
    if (s == "sim") return Column::sim;
    throw ConfigError("column must be analytic or sim, got '" + std::string(s) + "'");
}

struct PointDeviation {
    double x = 0.0;
    double a = 0.0;
    double b = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;  // relative to |b|; inf when b == 0 and a != b
    bool ci_overlap = false;
    bool pass = false;
};

struct ComparisonReport {
    Column column = Column::analytic;
    double tolerance = 0.0;
    std::vector<PointDeviation> points;
    std::size_t skipped = 0;  // both values missing
    double max_abs_dev = 0.0;
    double max_abs_dev_x = NAN;
    bool pass = true;

    Json to_json() const {
        Json j;
        j["column"] = std::string(to_string(column));
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        j["max_abs_dev"] = std::isfinite(max_abs_dev) ? Json(max_abs_dev) : Json("inf");
        j["max_abs_dev_x"] = std::isnan(max_abs_dev_x) ? Json() : Json(max_abs_dev_x);
        j["n_points"] = points.size();
        j["n_skipped"] = skipped;
        Json pts = Json::array();
        for (const auto& p : points) {
            Json q;
            q["x"] = p.x;
            q["a"] = std::isfinite(p.a) ? Json(p.a) : Json();
            q["b"] = std::isfinite(p.b) ? Json(p.b) : Json();
            q["abs_dev"] = std::isfinite(p.abs_dev) ? Json(p.abs_dev) : Json();
            q["rel_dev"] = std::isfinite(p.rel_dev) ? Json(p.rel_dev) : Json();
            q["ci_overlap"] = p.ci_overlap;
            q["pass"] = p.pass;
            pts.push_back(std::move(q));
        }
        j["points"] = std::move(pts);
        return j;
    }
};

inline bool same_x(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

/// Point-by-point comparison of one column of two curves on an identical
/// x grid. A point passes when |a - b| <= tol, or, for the sim column,
/// when both confidence intervals are known and overlap. Rows where both
/// values are missing are skipped; a value missing on one side fails.
inline ComparisonReport compare_curves(const Curve& a, const Curve& b, double tol, Column column = Column::analytic) {
    if (!(tol >= 0.0)) throw ConfigError("tolerance must be >= 0");
    if (a.size() != b.size())
        throw ConfigError("x grids differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " points");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_x(a[i].x, b[i].x))
            throw ConfigError("x grids differ at row " + std::to_string(i + 1) + ": " + format_number(a[i].x) +
                              " vs " + format_number(b[i].x));

    ComparisonReport r;
    r.column = column;
    r.tolerance = tol;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double va = column == Column::analytic ? a[i].analytic : a[i].sim;
        const double vb = column == Column::analytic ? b[i].analytic : b[i].sim;
        if (std::isnan(va) && std::isnan(vb)) {
            ++r.skipped;
            continue;
        }
        PointDeviation p;
        p.x = a[i].x;
        p.a = va;
        p.b = vb;
        p.abs_dev = std::abs(va - vb);
        p.rel_dev = vb != 0.0 ? p.abs_dev / std::abs(vb) : (p.abs_dev == 0.0 ? 0.0 : INFINITY);
        if (column == Column::sim && std::isfinite(a[i].sim_ci) && std::isfinite(b[i].sim_ci))
            p.ci_overlap = p.abs_dev <= a[i].sim_ci + b[i].sim_ci;
        p.pass = p.abs_dev <= tol || p.ci_overlap;
        if (!std::isfinite(p.abs_dev)) {
            p.abs_dev = INFINITY;
            p.pass = false;
        }
        if (p.abs_dev > r.max_abs_dev) {
            r.max_abs_dev = p.abs_dev;
            r.max_abs_dev_x = p.x;
        }
        r.pass = r.pass && p.pass;
        r.points.push_back(p);
    }
    if (r.points.empty()) throw ConfigError("no comparable points in column " + std::string(to_string(column)));
    return r;
}

inline ComparisonReport compare_files(const std::string& file_a, const std::string& file_b, double tol,
                                      Column column = Column::analytic) {
    return compare_curves(read_curve_file(file_a), read_curve_file(file_b), tol, column);
}

} // namespace fdnet::harness
