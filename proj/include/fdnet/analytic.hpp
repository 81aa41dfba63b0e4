#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fdnet/errors.hpp"
#include "fdnet/geometry.hpp"
#include "fdnet/quadrature.hpp"
#include "fdnet/radio.hpp"
#include "fdnet/scenario.hpp"

// Closed-form and quadrature evaluation of coverage probabilities and
// inverse-SINR bounds for the clustered full-duplex model. Thresholds T are
// linear. Unless stated otherwise expectations over the user distance use
// the density 2r/R_c^2 on [0, R_c] and the uncapped power-control law.

namespace fdnet {

inline double csc_2pi_over_alpha(double alpha) {
    const double s = std::sin(2.0 * std::numbers::pi / alpha);
    if (!(alpha > 2.0) || !(s > 0.0)) throw ConfigError("csc(2pi/alpha) requires alpha > 2");
    return 1.0 / s;
}

/// Exponent of the other-cell Laplace transform at serving distance r,
///   (2 pi^2 lambda T / alpha) csc(2pi/alpha) r^alpha (r^-alpha / T)^((alpha-2)/alpha),
/// evaluated as written (0 at r = 0).
inline double other_cell_exponent(double r, double T, const ScenarioParams& p) {
    if (r == 0.0 || T == 0.0) return 0.0;
    const double a = p.alpha;
    return 2.0 * std::numbers::pi * std::numbers::pi * p.lambda_bs * T / a * csc_2pi_over_alpha(a) *
           std::pow(r, a) * std::pow(std::pow(r, -a) / T, (a - 2.0) / a);
}

// T r^alpha sigma^2 / P_d
inline double dl_noise_exponent(double r, double T, const ScenarioParams& p) {
    if (p.sigma2 == 0.0) return 0.0;
    return T * std::pow(r, p.alpha) * p.sigma2 / p.p_d;
}

// Downlink coverage conditioned on the serving distance, no uplink terms.
inline double hd_dl_conditional(double r, double T, const ScenarioParams& p) {
    return std::exp(-dl_noise_exponent(r, T, p) - other_cell_exponent(r, T, p));
}

inline void require_threshold(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("threshold must be finite and > 0");
}

/// Half-duplex downlink coverage. With sigma2 = 0 and alpha = 4 this is
/// E_r[exp(-(pi^2/2) lambda r^2 sqrt(T))].
inline double hd_dl_coverage(double T, const ScenarioParams& p, const QuadratureSpec& q = {}) {
    p.validate();
    require_threshold(T);
    return integrate([&](double r) { return hd_dl_conditional(r, T, p) * serving_distance_pdf(r, p.r_c); }, 0.0,
                     p.r_c, q);
}

// ---------------------------------------------------------------------------
// Same-cell uplink interference factor E_gamma[T0]

struct ZetaTerm {
    double zeta = 0.0;
    // pi sqrt(|zeta|/2) < 1, the closed form has a real value
    bool valid = true;
};

inline ZetaTerm zeta_term(double T, double r_d, double r_u, const ScenarioParams& p) {
    if (r_d == r_u) return {-INFINITY, false};
    if (r_d == 0.0 || r_u == 0.0 || p.p_0 == 0.0) return {0.0, true};
    const double a = p.alpha;
    const double q = (r_d - r_u) * (r_d - r_u) * std::pow(r_u, -2.0 * p.epsilon) / (r_d * r_d);
    const double zeta = -(a * p.p_0 * T * r_d * r_u) /
                        ((r_d - r_u) * (r_d - r_u) * (p.p_d * std::pow(q, a / 2.0) + p.p_0 * T));
    const double x = std::numbers::pi * std::sqrt(-zeta / 2.0);
    return {zeta, std::isfinite(zeta) && x < 1.0};
}

// T0 at gamma = 0, where the two users are closest and interference is largest.
inline double same_cell_factor_aligned(double T, double r_d, double r_u, const ScenarioParams& p) {
    const double k = p.p_0 * std::pow(r_u, p.alpha * p.epsilon) * T * std::pow(r_d, p.alpha);
    if (k == 0.0) return 1.0;
    const double d_a = std::pow(std::abs(r_d - r_u), p.alpha);
    return d_a / (d_a + k / p.p_d);
}

struct ClosedFormGuard {
    // Maximum relative deviation from the exact factor that the guard admits.
    double tolerance = 0.02;
};

/// Second-order closed form of E_gamma[T0] with the leading minus sign.
///
/// zeta is never positive, so sqrt(2 zeta) atan(pi sqrt(zeta/2)) is taken
/// as -sqrt(2|zeta|) artanh(pi sqrt(|zeta|/2)). Algebraically the result
/// equals T0(gamma=0) * artanh(x)/x with x = pi sqrt(|zeta|/2); since the
/// exact factor lies in [T0(gamma=0), 1], requiring
///   artanh(x)/x <= 1 + tol  and  T0(gamma=0) artanh(x)/x >= 1 - tol
/// bounds the relative error by tol. Outside that region (including
/// x >= 1 and r_d == r_u) the result is empty and callers fall back to
/// same_cell_factor_oracle.
inline std::optional<double> same_cell_factor_closed(double T, double r_d, double r_u, const ScenarioParams& p,
                                                     ClosedFormGuard guard = {}) {
    const ZetaTerm z = zeta_term(T, r_d, r_u, p);
    if (!z.valid) return std::nullopt;
    const double aligned = same_cell_factor_aligned(T, r_d, r_u, p);
    const double x = std::numbers::pi * std::sqrt(-z.zeta / 2.0);
    double value;
    double growth;  // artanh(x)/x
    if (x < 1e-6) {
        growth = 1.0 + x * x / 3.0;
        value = aligned * growth;
    } else {
        growth = std::atanh(x) / x;
        const double a = p.alpha;
        const double q = (r_d - r_u) * (r_d - r_u) * std::pow(r_u, -2.0 * p.epsilon) / (r_d * r_d);
        const double sqrt_atan = -std::sqrt(-2.0 * z.zeta) * std::atanh(x);  // sqrt(2 zeta) atan(pi sqrt(zeta/2))
        value = -sqrt_atan * p.p_d * r_d * std::pow(r_u, 2.0 * p.epsilon - 1.0) * std::pow(q, (a + 2.0) / 2.0) /
                (std::numbers::pi * a * p.p_0 * T);
    }
    if (!std::isfinite(value)) return std::nullopt;
    if (growth > 1.0 + guard.tolerance || aligned * growth < 1.0 - guard.tolerance) return std::nullopt;
    return value;
}

/// (1/2pi) int_{-pi}^{pi} dgamma / (1 + P_0 r_u^(alpha eps) T r_d^alpha / (P_d d^alpha)),
/// integrated over [0, pi] by evenness in gamma.
inline double same_cell_factor_oracle(double T, double r_d, double r_u, const ScenarioParams& p,
                                      const QuadratureSpec& q = {}) {
    const double k = p.p_0 * std::pow(r_u, p.alpha * p.epsilon) * T * std::pow(r_d, p.alpha);
    if (k == 0.0) return 1.0;
    if (p.p_d == 0.0) return 0.0;
    const double kk = k / p.p_d;
    const double half_a = p.alpha / 2.0;
    auto integrand = [&](double g) {
        const double d2 = std::max(r_d * r_d + r_u * r_u - 2.0 * r_d * r_u * std::cos(g), 0.0);
        const double d_a = std::pow(d2, half_a);
        return d_a / (d_a + kk);
    };
    return integrate(integrand, 0.0, std::numbers::pi, q) / std::numbers::pi;
}

enum class FactorMode { automatic, oracle_only };

struct FdDlOptions {
    QuadratureSpec outer{1e-6, 1e-12, 40, 4};
    // Shallow: the closed-form/oracle switch leaves jumps below the guard
    // tolerance that deeper refinement cannot remove.
    QuadratureSpec middle{1e-6, 1e-12, 24, 4};
    QuadratureSpec inner{1e-7, 1e-12, 40, 4};
    FactorMode mode = FactorMode::automatic;
    ClosedFormGuard guard{1e-3};

    // Looser tolerances for rate integrals that evaluate coverage hundreds of times.
    static FdDlOptions for_rates() {
        FdDlOptions o;
        o.outer.rel_tol = 1e-5;
        o.middle.rel_tol = 1e-5;
        o.inner.rel_tol = 1e-6;
        return o;
    }
};

inline double same_cell_factor(double T, double r_d, double r_u, const ScenarioParams& p, const FdDlOptions& o) {
    if (o.mode == FactorMode::automatic)
        if (auto c = same_cell_factor_closed(T, r_d, r_u, p, o.guard)) return std::min(*c, 1.0);  // a probability
    return same_cell_factor_oracle(T, r_d, r_u, p, o.inner);
}

// E_{r_u}[E_gamma[T0]] for a downlink user at distance r_d.
inline double same_cell_factor_mean(double T, double r_d, const ScenarioParams& p, const FdDlOptions& o = {}) {
    if (p.p_0 == 0.0) return 1.0;
    const double bp[] = {r_d};
    return integrate(
        [&](double r_u) {
            if (r_u == 0.0) return 0.0;
            return same_cell_factor(T, r_d, r_u, p, o) * serving_distance_pdf(r_u, p.r_c);
        },
        0.0, p.r_c, o.middle, bp);
}

/// Full-duplex downlink coverage with fractional uplink power control,
/// neglecting other-cell uplink interference.
inline double fd_dl_coverage(double T, const ScenarioParams& p, const FdDlOptions& o = {}) {
    p.validate();
    require_threshold(T);
    return integrate(
        [&](double r_d) {
            const double f = serving_distance_pdf(r_d, p.r_c);
            if (f == 0.0) return 0.0;
            const double base = hd_dl_conditional(r_d, T, p);
            if (base == 0.0) return 0.0;
            return f * base * same_cell_factor_mean(T, r_d, p, o);
        },
        0.0, p.r_c, o.outer);
}

/// Full-duplex uplink coverage with fractional power control and constant
/// downlink power, neglecting other-cell uplink interference.
inline double fd_ul_conditional(double r_u, double T, const ScenarioParams& p) {
    const double a = p.alpha, e = p.epsilon;
    const double noise = p.sigma2 == 0.0 ? 0.0 : p.sigma2 * T * std::pow(r_u, a * (1.0 - e)) / p.p_0;
    const double interf = 2.0 * std::numbers::pi * std::numbers::pi * p.lambda_bs / a * csc_2pi_over_alpha(a) *
                          std::pow(p.p_0 * std::pow(r_u, a * (e - 1.0)) / (T * p.p_d), -2.0 / a);
    return std::exp(-noise - interf);
}

inline double fd_ul_coverage(double T, const ScenarioParams& p, const QuadratureSpec& q = {}) {
    p.validate();
    require_threshold(T);
    return integrate([&](double r) { return fd_ul_conditional(r, T, p) * serving_distance_pdf(r, p.r_c); }, 0.0,
                     p.r_c, q);
}

// ---------------------------------------------------------------------------
// Average inverse SINR bounds (no fading, (1+r)^-alpha path loss), R = r_c.

inline double mean_inverse_sinr_ul(const ScenarioParams& p) {
    p.validate();
    const double a = p.alpha, e = p.epsilon, R = p.r_c;
    if (!(e < 1.0 + 2.0 / a)) throw ConfigError("inverse-SINR bound requires epsilon < 1 + 2/alpha");
    return (1.0 / p.p_0) * (2.0 * std::pow(R, a * (1.0 - e)) / (a * (1.0 - e) + 2.0)) *
           (p.sigma2 + 2.0 * std::numbers::pi * p.lambda_bs * p.p_d / (a * a - 3.0 * a + 2.0));
}

inline double mean_inverse_sinr_dl(const ScenarioParams& p) {
    p.validate();
    const double a = p.alpha, e = p.epsilon, R = p.r_c;
    return (2.0 * std::pow(R, a) / (a + 2.0)) *
               (p.sigma2 / p.p_d + 2.0 * std::numbers::pi * p.lambda_bs / (a * a - 3.0 * a + 2.0)) +
           p.p_0 * std::pow(R, a * e + 2.0) * (2.0 * a - 1.0) / (p.p_d * (a - 1.0) * (a * e + 2.0));
}

inline double mean_inverse_sinr(Link link, const ScenarioParams& p) {
    return link == Link::dl ? mean_inverse_sinr_dl(p) : mean_inverse_sinr_ul(p);
}

} // namespace fdnet
