#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fdnet/analytic.hpp"
#include "fdnet/errors.hpp"
#include "fdnet/harness/config.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"
#include "fdnet/montecarlo.hpp"
#include "fdnet/rate.hpp"

namespace fdnet::harness {

// Output of one task: the curve plus manifest fields describing the run.
struct TaskResult {
    Curve curve;
    Json manifest;
    bool degenerate_warning = false;
};

inline bool has_analytic(Link link, Duplex duplex) { return !(link == Link::ul && duplex == Duplex::hd); }

inline void require_analytic(const RunConfig& c) {
    if (c.method == MethodSel::analytic && !has_analytic(c.link, c.duplex))
        throw ConfigError("no analytic model for half-duplex uplink; use method = sim");
}

/// Analytic coverage law for a link; `for_rates` trades accuracy for speed
/// where the law is evaluated hundreds of times.
inline CoverageFn analytic_coverage(const ScenarioParams& p, Link link, Duplex duplex, bool for_rates = false) {
    if (link == Link::dl && duplex == Duplex::hd) return [p](double T) { return hd_dl_coverage(T, p); };
    if (link == Link::dl) {
        const FdDlOptions o = for_rates ? FdDlOptions::for_rates() : FdDlOptions{};
        return [p, o](double T) { return fd_dl_coverage(T, p, o); };
    }
    if (duplex == Duplex::fd) return [p](double T) { return fd_ul_coverage(T, p); };
    throw ConfigError("no analytic model for half-duplex uplink");
}

inline MeanRateOptions rate_mean_options(Link link, Duplex duplex) {
    MeanRateOptions o;
    if (link == Link::dl && duplex == Duplex::fd) o.quad = {1e-5, 1e-12, 40, 4};
    return o;
}

namespace detail {

inline void note_sim(Json& m, std::size_t n_resampled, std::size_t n_drops, bool& warn) {
    m["n_resampled"] = n_resampled;
    warn = static_cast<double>(n_resampled) > kDegenerateWarnFraction * static_cast<double>(n_drops);
    m["degenerate_warning"] = warn;
}

} // namespace detail

/// P[SINR > T] over the threshold grid.
inline TaskResult run_coverage(const RunConfig& c) {
    require_analytic(c);
    const ScenarioParams p = c.scenario();
    TaskResult r;
    r.manifest = make_manifest(c);
    r.manifest["x_label"] = "threshold_db";
    for (double t : c.thresholds_db) r.curve.push_back({.x = t});
    if (wants_analytic(c.method) && has_analytic(c.link, c.duplex)) {
        const CoverageFn cov = analytic_coverage(p, c.link, c.duplex);
        for (auto& row : r.curve) row.analytic = cov(from_db(row.x));
    }
    if (wants_sim(c.method)) {
        const CoverageCurve s = estimate_coverage(p, c.link, c.duplex, c.thresholds_db, c.sim_options());
        for (std::size_t i = 0; i < r.curve.size(); ++i) {
            r.curve[i].sim = s.probability[i];
            r.curve[i].sim_ci = s.ci_half_width[i];
        }
        detail::note_sim(r.manifest, s.n_resampled, s.n_drops, r.degenerate_warning);
    }
    return r;
}

/// Mean inverse SINR in dB against downlink power. The analytic column is
/// the closed-form bound; sim is the no-fading Monte Carlo mean with its
/// standard error as sim_ci (dB). Full duplex only.
inline TaskResult run_inverse_sinr(const RunConfig& c) {
    if (c.duplex != Duplex::fd) throw ConfigError("inverse-sinr is defined for full duplex only");
    TaskResult r;
    r.manifest = make_manifest(c);
    r.manifest["x_label"] = "p_d_dbm";
    std::size_t resampled = 0, drops = 0;
    for (double pd : c.p_d_sweep()) {
        RunConfig ci = c;
        ci.p_d_dbm = pd;
        const ScenarioParams p = ci.scenario();
        CurveRow row{.x = pd};
        if (wants_analytic(c.method)) row.analytic = to_db(mean_inverse_sinr(c.link, p));
        if (wants_sim(c.method)) {
            const MomentReport m = estimate_inverse_sinr(p, c.link, c.sim_options());
            row.sim = m.mean_inv_sinr_db;
            row.sim_ci = m.std_error;
            resampled += m.n_resampled;
            drops += m.n_drops;
        }
        r.curve.push_back(row);
    }
    if (wants_sim(c.method)) detail::note_sim(r.manifest, resampled, drops, r.degenerate_warning);
    return r;
}

/// Rate CDF P(C <= c) over the rate grid, with mean and 5% rates recorded
/// in the manifest.
inline TaskResult run_rate(const RunConfig& c) {
    require_analytic(c);
    const ScenarioParams p = c.scenario();
    TaskResult r;
    r.manifest = make_manifest(c);
    r.manifest["x_label"] = "rate_bps_hz";
    for (double x : c.rates) r.curve.push_back({.x = x});
    if (wants_analytic(c.method) && has_analytic(c.link, c.duplex)) {
        const CoverageFn cov = analytic_coverage(p, c.link, c.duplex);
        for (auto& row : r.curve) row.analytic = rate_cdf(cov, c.duplex, row.x);
        const CoverageFn fast = analytic_coverage(p, c.link, c.duplex, true);
        r.manifest["mean_rate_analytic"] = mean_rate(fast, c.duplex, rate_mean_options(c.link, c.duplex));
        r.manifest["edge_rate_analytic"] = cell_edge_rate(fast, c.duplex);
    }
    if (wants_sim(c.method)) {
        const DropStats s = simulate_sinr(p, c.link, c.duplex, c.sim_options());
        const RateProfile prof = rate_profile_from_sinr(s.values, c.duplex);
        for (auto& row : r.curve) {
            row.sim = prof.cdf(row.x);
            row.sim_ci = binomial_ci_half_width(row.sim, s.values.size());
        }
        r.manifest["mean_rate_sim"] = prof.mean;
        r.manifest["edge_rate_sim"] = prof.edge;
        detail::note_sim(r.manifest, s.n_resampled, s.values.size(), r.degenerate_warning);
    }
    return r;
}

inline TaskResult run_task(const RunConfig& c) {
    switch (c.task) {
    case Task::coverage: return run_coverage(c);
    case Task::inverse_sinr: return run_inverse_sinr(c);
    case Task::rate: return run_rate(c);
    default: throw ConfigError("task '" + std::string(to_string(c.task)) + "' does not produce a single curve");
    }
}

} // namespace fdnet::harness
