#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/montecarlo.hpp"
#include "fdnet/radio.hpp"
#include "fdnet/scenario.hpp"

namespace fdnet::harness {

enum class Task { coverage, inverse_sinr, rate, reproduce, compare };
enum class MethodSel { sim, analytic, both };

inline std::string_view to_string(Task t) {
    switch (t) {
    case Task::coverage: return "coverage";
    case Task::inverse_sinr: return "inverse-sinr";
    case Task::rate: return "rate";
    case Task::reproduce: return "reproduce";
    case Task::compare: return "compare";
    }
    return "?";
}

inline std::string_view to_string(MethodSel m) {
    return m == MethodSel::sim ? "sim" : m == MethodSel::analytic ? "analytic" : "both";
}

inline bool wants_sim(MethodSel m) { return m != MethodSel::analytic; }
inline bool wants_analytic(MethodSel m) { return m != MethodSel::sim; }

/// Everything one CLI run needs. Geometry may be given as an inter-BS
/// distance or as an explicit cell radius; lambda_bs defaults to
/// 1/(pi r_c^2) either way.
struct RunConfig {
    double alpha = 4.0;
    std::optional<double> inter_bs_distance;
    std::optional<double> r_c;
    std::optional<double> lambda_bs;
    double p_d_dbm = 40.0;
    double p0_dbm = -64.0;
    double p_max_dbm = 23.0;
    PowerUnitConvention units{};
    double epsilon = 0.2;
    double sigma2 = 0.0;
    double window_len = 10000.0;

    Task task = Task::coverage;
    Link link = Link::dl;
    Duplex duplex = Duplex::fd;
    MethodSel method = MethodSel::both;
    std::vector<double> thresholds_db = grid(-40.0, 5.0, 40.0);
    std::vector<double> rates = grid(0.0, 1.0, 15.0);
    std::vector<double> p_d_grid;  // inverse-sinr sweep; empty means {p_d_dbm}
    std::size_t n_drops = 10'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string out;

    static std::vector<double> grid(double start, double step, double stop) {
        std::vector<double> g;
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= n; ++i) g.push_back(start + step * static_cast<double>(i));
        return g;
    }

    ScenarioParams scenario() const {
        ScenarioParams p;
        p.alpha = alpha;
        if (inter_bs_distance && r_c) throw ConfigError("inter_bs_distance and r_c are mutually exclusive");
        p.r_c = r_c ? *r_c : (inter_bs_distance ? *inter_bs_distance / 2.0 : 200.0);
        if (!(p.r_c > 0.0)) throw ConfigError("r_c: must be > 0");
        p.lambda_bs = lambda_bs ? *lambda_bs : 1.0 / (std::numbers::pi * p.r_c * p.r_c);
        p.units = units;
        p.p_d = dbm_to_linear(p_d_dbm, units.p_d_unit);
        p.p_0 = dbm_to_linear(p0_dbm, units.p0_unit);
        p.p_max_u = dbm_to_linear(p_max_dbm);
        p.epsilon = epsilon;
        p.sigma2 = sigma2;
        p.window_len = window_len;
        return ScenarioParams::make(p);
    }

    SimulationOptions sim_options() const {
        SimulationOptions o;
        o.n_drops = n_drops;
        o.seed = seed;
        o.workers = workers;
        return o;
    }

    std::vector<double> p_d_sweep() const { return p_d_grid.empty() ? std::vector<double>{p_d_dbm} : p_d_grid; }

    void validate() const {
        (void)scenario();
        auto sorted_nonempty = [](const std::vector<double>& g, const char* name) {
            if (g.empty()) throw ConfigError(std::string(name) + ": grid must be nonempty");
            for (std::size_t i = 1; i < g.size(); ++i)
                if (!(g[i] > g[i - 1])) throw ConfigError(std::string(name) + ": grid must be strictly increasing");
        };
        sorted_nonempty(thresholds_db, "thresholds");
        sorted_nonempty(rates, "rates");
        if (!p_d_grid.empty()) sorted_nonempty(p_d_grid, "p_d_grid");
        for (double c : rates)
            if (c < 0.0) throw ConfigError("rates: values must be >= 0");
        if (n_drops < 1) throw ConfigError("n_drops: must be >= 1");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

inline double number(std::string_view v) {
    const double x = parse_number(v);
    if (!std::isfinite(x)) throw ConfigError("expected a finite number, got '" + std::string(v) + "'");
    return x;
}

inline std::uint64_t integer(std::string_view v) {
    const std::string s = trim(v);
    std::uint64_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("expected a nonnegative integer, got '" + s + "'");
    return x;
}

// "start:step:stop" or a comma-separated list.
inline std::vector<double> number_grid(std::string_view v) {
    const std::string s = trim(v);
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw ConfigError("grid must be start:step:stop");
        const double a = number(parts[0]), st = number(parts[1]), b = number(parts[2]);
        if (!(st > 0.0) || b < a) throw ConfigError("grid needs step > 0 and stop >= start");
        return RunConfig::grid(a, st, b);
    }
    std::vector<double> g;
    for (const auto& p : split(s, ',')) g.push_back(number(p));
    return g;
}

inline double in_range(double x, double lo, double hi, const char* what) {
    if (x < lo || x > hi) throw ConfigError(std::string("must lie in ") + what);
    return x;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"alpha", [](RunConfig& c, std::string_view v) {
             c.alpha = number(v);
             if (!(c.alpha > 2.0)) throw ConfigError("must be > 2");
         }},
        {"inter_bs_distance", [](RunConfig& c, std::string_view v) {
             const double d = number(v);
             if (!(d > 0.0)) throw ConfigError("must be > 0");
             c.inter_bs_distance = d;
         }},
        {"r_c", [](RunConfig& c, std::string_view v) {
             const double r = number(v);
             if (!(r > 0.0)) throw ConfigError("must be > 0");
             c.r_c = r;
         }},
        {"lambda_bs", [](RunConfig& c, std::string_view v) {
             const double l = number(v);
             if (!(l > 0.0)) throw ConfigError("must be > 0");
             c.lambda_bs = l;
         }},
        {"p_d_dbm", [](RunConfig& c, std::string_view v) { c.p_d_dbm = number(v); }},
        {"p0_dbm", [](RunConfig& c, std::string_view v) { c.p0_dbm = number(v); }},
        {"p_max_dbm", [](RunConfig& c, std::string_view v) { c.p_max_dbm = number(v); }},
        {"p0_unit", [](RunConfig& c, std::string_view v) { c.units.p0_unit = power_unit_from_string(trim(v)); }},
        {"p_d_unit", [](RunConfig& c, std::string_view v) { c.units.p_d_unit = power_unit_from_string(trim(v)); }},
        {"epsilon", [](RunConfig& c, std::string_view v) { c.epsilon = in_range(number(v), 0.0, 1.0, "[0, 1]"); }},
        {"sigma2", [](RunConfig& c, std::string_view v) {
             c.sigma2 = number(v);
             if (c.sigma2 < 0.0) throw ConfigError("must be >= 0");
         }},
        {"window_len", [](RunConfig& c, std::string_view v) {
             c.window_len = number(v);
             if (!(c.window_len > 0.0)) throw ConfigError("must be > 0");
         }},
        {"task", [](RunConfig& c, std::string_view v) {
             const auto s = trim(v);
             if (s == "coverage") c.task = Task::coverage;
             else if (s == "inverse-sinr") c.task = Task::inverse_sinr;
             else if (s == "rate") c.task = Task::rate;
             else if (s == "reproduce") c.task = Task::reproduce;
             else if (s == "compare") c.task = Task::compare;
             else throw ConfigError("unknown task '" + s + "'");
         }},
        {"link", [](RunConfig& c, std::string_view v) {
             const auto s = trim(v);
             if (s == "dl") c.link = Link::dl;
             else if (s == "ul") c.link = Link::ul;
             else throw ConfigError("expected dl or ul");
         }},
        {"duplex", [](RunConfig& c, std::string_view v) {
             const auto s = trim(v);
             if (s == "hd") c.duplex = Duplex::hd;
             else if (s == "fd") c.duplex = Duplex::fd;
             else throw ConfigError("expected hd or fd");
         }},
        {"method", [](RunConfig& c, std::string_view v) {
             const auto s = trim(v);
             if (s == "sim") c.method = MethodSel::sim;
             else if (s == "analytic") c.method = MethodSel::analytic;
             else if (s == "both") c.method = MethodSel::both;
             else throw ConfigError("expected sim, analytic or both");
         }},
        {"thresholds", [](RunConfig& c, std::string_view v) { c.thresholds_db = number_grid(v); }},
        {"rates", [](RunConfig& c, std::string_view v) { c.rates = number_grid(v); }},
        {"p_d_grid", [](RunConfig& c, std::string_view v) { c.p_d_grid = number_grid(v); }},
        {"n_drops", [](RunConfig& c, std::string_view v) {
             c.n_drops = integer(v);
             if (c.n_drops < 1) throw ConfigError("must be >= 1");
         }},
        {"seed", [](RunConfig& c, std::string_view v) { c.seed = integer(v); }},
        {"workers", [](RunConfig& c, std::string_view v) { c.workers = static_cast<unsigned>(integer(v)); }},
        {"out", [](RunConfig& c, std::string_view v) { c.out = trim(v); }},
    };
    return table;
}

} // namespace detail

inline bool is_config_key(std::string_view key) { return detail::setters().contains(key); }

// One `key = value` assignment with a location used in error messages.
struct Assignment {
    std::string key;
    std::string value;
    std::string where;
};

/// Applies assignments to a copy of `base`. All violations are collected
/// and reported together; on any error nothing is applied.
inline RunConfig apply_assignments(const RunConfig& base, const std::vector<Assignment>& items) {
    RunConfig c = base;
    std::vector<std::string> errors;
    for (const auto& a : items) {
        const auto it = detail::setters().find(a.key);
        if (it == detail::setters().end()) {
            errors.push_back(a.where + ": unknown key '" + a.key + "'");
            continue;
        }
        try {
            it->second(c, a.value);
        } catch (const ConfigError& e) {
            errors.push_back(a.where + ": " + a.key + ": " + e.what());
        }
    }
    if (errors.empty()) {
        try {
            c.validate();
        } catch (const ConfigError& e) {
            errors.push_back(std::string("config: ") + e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    return c;
}

namespace detail {

inline std::string join_lines(const std::vector<std::string>& lines) {
    std::string msg;
    for (const auto& e : lines) msg += (msg.empty() ? "" : "\n") + e;
    return msg;
}

// Syntax errors go to `errors`; well-formed lines are returned.
inline std::vector<Assignment> scan_assignments(std::string_view text, const std::string& source,
                                                std::vector<std::string>& errors) {
    std::vector<Assignment> items;
    std::map<std::string, std::size_t> seen;
    std::size_t lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string s = detail::trim(line);
        if (s.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        std::string key = detail::trim(std::string_view(s).substr(0, eq));
        if (auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
            errors.push_back(where + ": duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
            continue;
        }
        items.push_back({std::move(key), detail::trim(std::string_view(s).substr(eq + 1)), where});
    }
    return items;
}

} // namespace detail

inline std::vector<Assignment> parse_assignments(std::string_view text, const std::string& source = "config") {
    std::vector<std::string> errors;
    auto items = detail::scan_assignments(text, source, errors);
    if (!errors.empty()) throw ConfigError(detail::join_lines(errors));
    return items;
}

/// Parses a line-based `key = value` document; `#` starts a comment.
/// Unknown keys are errors. An empty document yields the defaults.
inline RunConfig parse_config(std::string_view text, const std::string& source = "config") {
    std::vector<std::string> errors;
    const auto items = detail::scan_assignments(text, source, errors);
    try {
        RunConfig c = apply_assignments(RunConfig{}, items);
        if (errors.empty()) return c;
    } catch (const ConfigError& e) {
        errors.emplace_back(e.what());
    }
    throw ConfigError(detail::join_lines(errors));
}

// "key=value" from the command line.
inline Assignment parse_override(std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ConfigError("--set expects key=value, got '" + std::string(kv) + "'");
    return {detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)), "--set"};
}

} // namespace fdnet::harness
