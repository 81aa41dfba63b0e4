#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "fdnet/errors.hpp"
#include "fdnet/montecarlo.hpp"
#include "fdnet/quadrature.hpp"

namespace fdnet {

// Coverage P[SINR > T] as a function of the linear threshold.
using CoverageFn = std::function<double(double)>;

// SINR threshold at which rate c is reached: 2^(c/k) - 1.
inline double rate_threshold(double c, Duplex duplex) {
    return std::expm1(c * std::numbers::ln2 / rate_multiplier(duplex));
}

/// Rate CDF P[k log2(1+SINR) <= c] = 1 - coverage(2^(c/k) - 1), k = 2 for full duplex.
inline double rate_cdf(const CoverageFn& coverage, Duplex duplex, double c) {
    if (!(c >= 0.0)) throw ConfigError("rate must be >= 0");
    if (c == 0.0) return 0.0;
    return 1.0 - coverage(rate_threshold(c, duplex));
}

struct MeanRateOptions {
    QuadratureSpec quad{1e-7, 1e-12, 40, 8};
    // Truncation point: first c (doubling) where coverage falls below this.
    double tail_coverage = 1e-6;
    double c_floor = 1e-14;
    double c_limit = 4096.0;
};

/// Mean rate E[C] = int_0^inf (1 - F_C(c)) dc.
///
/// Integrated in log c on [c_floor, c_max]; below c_floor the integrand is
/// bounded by 1. Beyond c_max the tail uses the slowest decay any of the
/// coverage laws here can have (coverage ~ T^-1/2), i.e.
/// coverage(c_max) * 2k / ln 2.
inline double mean_rate(const CoverageFn& coverage, Duplex duplex, const MeanRateOptions& o = {}) {
    const double k = rate_multiplier(duplex);
    auto ccdf = [&](double c) { return coverage(rate_threshold(c, duplex)); };
    double c_max = 1.0 / 64.0;
    double tail_p = ccdf(c_max);
    while (tail_p >= o.tail_coverage) {
        c_max *= 2.0;
        if (c_max > o.c_limit) throw NumericalError("rate distribution tail does not decay; mean rate diverges");
        tail_p = ccdf(c_max);
    }
    const double head = o.c_floor * ccdf(o.c_floor);
    const double body = integrate(
        [&](double u) {
            const double c = std::exp(u);
            return ccdf(c) * c;
        },
        std::log(o.c_floor), std::log(c_max), o.quad);
    const double tail = tail_p * 2.0 * k / std::numbers::ln2;
    return head + body + tail;
}

struct EdgeRateOptions {
    double quantile = 0.05;
    double rel_tol = 1e-6;
    double c_min = 1e-30;
    double c_limit = 4096.0;
    // A CDF rise larger than this across the final bracket is treated as a jump.
    double max_jump = 1e-2;
};

/// Rate at which F_C reaches the quantile (5% cell-edge rate by default),
/// by bisection in log c.
inline double cell_edge_rate(const CoverageFn& coverage, Duplex duplex, const EdgeRateOptions& o = {}) {
    auto cdf = [&](double c) { return 1.0 - coverage(rate_threshold(c, duplex)); };
    double lo = o.c_min;
    const double f_lo = cdf(lo);
    if (f_lo >= o.quantile)
        throw NumericalError("rate CDF exceeds the edge quantile at c=0+; edge rate is 0");
    double hi = 1.0;
    while (cdf(hi) < o.quantile) {
        lo = hi;
        hi *= 2.0;
        if (hi > o.c_limit) throw NumericalError("rate CDF never reaches the edge quantile");
    }
    while (hi / lo - 1.0 > o.rel_tol) {
        const double mid = std::sqrt(lo * hi);
        (cdf(mid) < o.quantile ? lo : hi) = mid;
    }
    if (cdf(hi) - cdf(lo) > o.max_jump)
        throw NumericalError("rate CDF jumps across the edge quantile; edge rate is not defined");
    return std::sqrt(lo * hi);
}

} // namespace fdnet
