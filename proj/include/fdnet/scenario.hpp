#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "fdnet/errors.hpp"

namespace fdnet {

enum class PowerUnit { milliwatt, watt };

inline std::string_view to_string(PowerUnit u) { return u == PowerUnit::watt ? "W" : "mW"; }

inline PowerUnit power_unit_from_string(std::string_view s) {
    if (s == "mW" || s == "mw" || s == "milliwatt") return PowerUnit::milliwatt;
    if (s == "W" || s == "w" || s == "watt") return PowerUnit::watt;
    throw ConfigError("unknown power unit '" + std::string(s) + "' (expected mW or W)");
}

// x dBm expressed as a linear number in the requested unit.
inline double dbm_to_linear(double dbm, PowerUnit unit = PowerUnit::milliwatt) {
    return unit == PowerUnit::watt ? std::pow(10.0, (dbm - 30.0) / 10.0) : std::pow(10.0, dbm / 10.0);
}

inline double linear_to_dbm(double value, PowerUnit unit = PowerUnit::milliwatt) {
    const double db = 10.0 * std::log10(value);
    return unit == PowerUnit::watt ? db + 30.0 : db;
}

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

// Which unit each configured power was interpreted in when converting from dBm.
// The formulas are unit-agnostic; only the numeric value handed to them changes.
struct PowerUnitConvention {
    PowerUnit p0_unit = PowerUnit::milliwatt;
    PowerUnit p_d_unit = PowerUnit::milliwatt;

    friend bool operator==(const PowerUnitConvention&, const PowerUnitConvention&) = default;
};

/// Physical and model parameters of one network configuration.
///
/// Powers are linear. Distances in metres, densities per square metre.
/// Instances are validated on construction through `make()`; a
/// ScenarioParams obtained that way always satisfies its invariants.
struct ScenarioParams {
    double alpha = 4.0;
    double lambda_bs = 1.0 / (std::numbers::pi * 200.0 * 200.0);
    double r_c = 200.0;
    double p_d = 1.0e4;                 // 40 dBm
    double p_0 = std::pow(10.0, -6.4);  // -64 dBm
    double p_max_u = std::pow(10.0, 2.3);  // 23 dBm
    double epsilon = 0.2;
    double sigma2 = 0.0;
    double window_len = 10000.0;
    PowerUnitConvention units{};

    // Throws ConfigError naming the first violated invariant.
    void validate() const {
        using detail::require;
        require(std::isfinite(alpha) && alpha > 2.0, "alpha must be > 2");
        require(std::isfinite(lambda_bs) && lambda_bs > 0.0, "lambda_bs must be > 0");
        require(std::isfinite(r_c) && r_c > 0.0, "r_c must be > 0");
        require(std::isfinite(p_d) && p_d >= 0.0, "p_d must be >= 0");
        require(std::isfinite(p_0) && p_0 >= 0.0, "p_0 must be >= 0");
        require(std::isfinite(p_max_u) && p_max_u >= 0.0, "p_max_u must be >= 0");
        require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
        require(std::isfinite(sigma2) && sigma2 >= 0.0, "sigma2 must be >= 0");
        require(std::isfinite(window_len) && window_len > 0.0, "window_len must be > 0");
    }

    static ScenarioParams make(ScenarioParams p) {
        p.validate();
        return p;
    }

    // Distance beyond which the uplink power control clips at p_max_u.
    // Infinite when epsilon == 0 and p_0 <= p_max_u.
    double saturation_distance() const {
        if (p_0 <= 0.0) return INFINITY;
        if (epsilon == 0.0) return p_0 <= p_max_u ? INFINITY : 0.0;
        return std::pow(p_max_u / p_0, 1.0 / (alpha * epsilon));
    }

    // Same parameters with the cell radius derived from the mean inter-BS
    // distance: r_c = d/2 and lambda_bs = 1/(pi r_c^2).
    ScenarioParams with_inter_bs_distance(double d_bs) const {
        if (!(std::isfinite(d_bs) && d_bs > 0.0)) throw ConfigError("inter-BS distance must be > 0");
        ScenarioParams p = *this;
        p.r_c = d_bs / 2.0;
        p.lambda_bs = 1.0 / (std::numbers::pi * p.r_c * p.r_c);
        return make(p);
    }

    // Cell radius r, density coupled as lambda_bs = 1/(pi r^2).
    ScenarioParams with_cell_radius(double r) const {
        if (!(std::isfinite(r) && r > 0.0)) throw ConfigError("r_c must be > 0");
        ScenarioParams p = *this;
        p.r_c = r;
        p.lambda_bs = 1.0 / (std::numbers::pi * r * r);
        return make(p);
    }

    ScenarioParams with_powers_dbm(double p_d_dbm, double p0_dbm, PowerUnitConvention conv) const {
        ScenarioParams p = *this;
        p.units = conv;
        p.p_d = dbm_to_linear(p_d_dbm, conv.p_d_unit);
        p.p_0 = dbm_to_linear(p0_dbm, conv.p0_unit);
        return make(p);
    }
};

inline ScenarioParams from_inter_bs_distance(double d_bs, const ScenarioParams& base = {}) {
    return base.with_inter_bs_distance(d_bs);
}

} // namespace fdnet
