#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/geometry.hpp"
#include "fdnet/radio.hpp"
#include "fdnet/rng.hpp"
#include "fdnet/scenario.hpp"

namespace fdnet {

enum class Method { sim, analytic };

struct SimulationOptions {
    std::size_t n_drops = 10'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: hardware concurrency
    // Drops whose receiver is closer than this to a transmitter are redrawn
    // (plain path loss only).
    double min_distance = 0.1;
    std::size_t max_attempts = 1000;
};

// Fraction of discarded drops above which a run is flagged.
inline constexpr double kDegenerateWarnFraction = 1e-3;

struct DropStats {
    std::vector<double> values;
    std::size_t n_resampled = 0;

    bool degenerate_warning() const {
        return !values.empty() && static_cast<double>(n_resampled) > kDegenerateWarnFraction * values.size();
    }
};

namespace detail {

inline unsigned resolve_workers(unsigned requested, std::size_t n) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
}

} // namespace detail

/// Runs `opts.n_drops` independent drops and records `stat(budget)` for each.
///
/// Drop i draws from engine (seed, i, attempt); results are stored by drop
/// index, so any worker count produces bit-identical output. With unit
/// fading every |h|^2 is 1; otherwise Rayleigh gains are drawn after the
/// geometry from the same engine.
template <class Stat>
DropStats run_drops(const ScenarioParams& p, Link link, Duplex duplex, const SimulationOptions& opts,
                    PathLossModel model, bool unit_fading, Stat stat) {
    p.validate();
    if (opts.n_drops < 1) throw ConfigError("n_drops must be >= 1");
    DropStats out;
    out.values.assign(opts.n_drops, 0.0);
    std::vector<std::uint32_t> redraws(opts.n_drops, 0);

    auto one_drop = [&](std::size_t i) {
        for (std::size_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
            auto rng = make_engine(opts.seed, i, attempt);
            NetworkRealization net;
            try {
                net = sample_network(p, rng);
            } catch (const GeometryError&) {
                ++redraws[i];
                continue;
            }
            if (model == PathLossModel::plain && closest_transmitter(link, net) < opts.min_distance) {
                ++redraws[i];
                continue;
            }
            const LinkFading h = unit_fading ? LinkFading::unit(net.size()) : LinkFading::draw(net.size(), rng);
            const double v = stat(link_budget(link, net, h, p, duplex, model));
            if (std::isnan(v)) {
                ++redraws[i];
                continue;
            }
            out.values[i] = v;
            return;
        }
        throw GeometryError("drop " + std::to_string(i) + " stayed degenerate after " +
                            std::to_string(opts.max_attempts) + " redraws");
    };

    const unsigned workers = detail::resolve_workers(opts.workers, opts.n_drops);
    if (workers == 1) {
        for (std::size_t i = 0; i < opts.n_drops; ++i) one_drop(i);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        const std::size_t chunk = (opts.n_drops + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    const std::size_t lo = w * chunk, hi = std::min(opts.n_drops, lo + chunk);
                    for (std::size_t i = lo; i < hi; ++i) one_drop(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    out.n_resampled = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
    return out;
}

// Per-drop SINR with Rayleigh fading and plain path loss.
inline DropStats simulate_sinr(const ScenarioParams& p, Link link, Duplex duplex, const SimulationOptions& opts) {
    return run_drops(p, link, duplex, opts, PathLossModel::plain, false,
                     [](const LinkBudget& b) { return b.sinr(); });
}

/// Coverage curve P[SINR > T] over a dB threshold grid.
struct CoverageCurve {
    std::vector<double> thresholds_db;
    std::vector<double> probability;
    std::vector<double> ci_half_width;
    Link link = Link::dl;
    Duplex duplex = Duplex::hd;
    Method method = Method::sim;
    ScenarioParams params{};
    std::size_t n_drops = 0;
    std::size_t n_resampled = 0;

    bool degenerate_warning() const {
        return n_drops > 0 && static_cast<double>(n_resampled) > kDegenerateWarnFraction * n_drops;
    }
};

// 95% normal-approximation half width; adequate for n >= 1e3 and p in [0.01, 0.99].
inline double binomial_ci_half_width(double p, std::size_t n) {
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline CoverageCurve coverage_from_samples(const std::vector<double>& sinr, const std::vector<double>& thresholds_db) {
    if (thresholds_db.empty()) throw ConfigError("threshold grid is empty");
    if (sinr.empty()) throw ConfigError("no SINR samples");
    CoverageCurve c;
    c.thresholds_db = thresholds_db;
    c.n_drops = sinr.size();
    for (double t_db : thresholds_db) {
        const double t = from_db(t_db);
        const auto hits = std::count_if(sinr.begin(), sinr.end(), [t](double s) { return s > t; });
        const double pr = static_cast<double>(hits) / static_cast<double>(sinr.size());
        c.probability.push_back(pr);
        c.ci_half_width.push_back(binomial_ci_half_width(pr, sinr.size()));
    }
    return c;
}

inline CoverageCurve estimate_coverage(const ScenarioParams& p, Link link, Duplex duplex,
                                       const std::vector<double>& thresholds_db, const SimulationOptions& opts) {
    if (thresholds_db.empty()) throw ConfigError("threshold grid is empty");
    const DropStats s = simulate_sinr(p, link, duplex, opts);
    CoverageCurve c = coverage_from_samples(s.values, thresholds_db);
    c.link = link;
    c.duplex = duplex;
    c.method = Method::sim;
    c.params = p;
    c.n_resampled = s.n_resampled;
    return c;
}

struct MomentReport {
    double mean_inv_sinr = 0.0;     // linear
    double mean_inv_sinr_db = 0.0;
    double mean_sinr_db = 0.0;
    // Standard error of the inverse-SINR mean, as a dB offset above mean_inv_sinr_db.
    double std_error = 0.0;
    std::size_t n_drops = 0;
    std::size_t n_resampled = 0;
};

/// Average inverse SINR of a full-duplex link with every |h|^2 = 1 and
/// regularized (1+r)^-alpha path loss.
///
/// The mean is carried by rare drops with an interferer within metres of
/// the receiver, so it converges slowly in n_drops and typically sits
/// below the closed-form bound at desk-scale drop counts.
inline MomentReport estimate_inverse_sinr(const ScenarioParams& p, Link link, const SimulationOptions& opts) {
    const DropStats inv = run_drops(p, link, Duplex::fd, opts, PathLossModel::regularized, true,
                                    [](const LinkBudget& b) {
                                        const double s = b.sinr();
                                        return (s > 0.0 && std::isfinite(s)) ? 1.0 / s : NAN;
                                    });
    const std::size_t n = inv.values.size();
    double sum = 0.0, sum_sinr = 0.0;
    for (double v : inv.values) {
        sum += v;
        sum_sinr += 1.0 / v;
    }
    const double mean = sum / n;
    double var = 0.0;
    for (double v : inv.values) var += (v - mean) * (v - mean);
    var = n > 1 ? var / (n - 1) : 0.0;
    const double se = std::sqrt(var / n);

    MomentReport r;
    r.mean_inv_sinr = mean;
    r.mean_inv_sinr_db = to_db(mean);
    r.mean_sinr_db = to_db(sum_sinr / n);
    r.std_error = to_db((mean + se) / mean);
    r.n_drops = n;
    r.n_resampled = inv.n_resampled;
    if (!std::isfinite(r.mean_inv_sinr_db) || !std::isfinite(r.mean_sinr_db))
        throw NumericalError("inverse-SINR estimate is not finite");
    return r;
}

// Bandwidth factor: full duplex carries both directions on one resource.
inline double rate_multiplier(Duplex d) { return d == Duplex::fd ? 2.0 : 1.0; }

struct RateProfile {
    double mean = 0.0;
    double edge = 0.0;                 // 5th percentile
    std::vector<double> sorted_rates;  // empirical CDF support
    double multiplier = 1.0;
    std::size_t n_resampled = 0;

    // Empirical P(C <= c).
    double cdf(double c) const {
        const auto it = std::upper_bound(sorted_rates.begin(), sorted_rates.end(), c);
        return static_cast<double>(it - sorted_rates.begin()) / static_cast<double>(sorted_rates.size());
    }
};

// Smallest sample x with empirical CDF(x) >= q.
inline double empirical_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ConfigError("quantile of an empty sample");
    const auto n = static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::ceil(q * n));
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    return sorted[k - 1];
}

inline RateProfile rate_profile_from_sinr(const std::vector<double>& sinr, Duplex duplex) {
    RateProfile r;
    r.multiplier = rate_multiplier(duplex);
    r.sorted_rates.reserve(sinr.size());
    for (double s : sinr) r.sorted_rates.push_back(r.multiplier * std::log2(1.0 + s));
    std::sort(r.sorted_rates.begin(), r.sorted_rates.end());
    r.mean = std::accumulate(r.sorted_rates.begin(), r.sorted_rates.end(), 0.0) / r.sorted_rates.size();
    r.edge = empirical_quantile(r.sorted_rates, 0.05);
    return r;
}

inline RateProfile estimate_rate_stats(const ScenarioParams& p, Link link, Duplex duplex,
                                       const SimulationOptions& opts) {
    const DropStats s = simulate_sinr(p, link, duplex, opts);
    RateProfile r = rate_profile_from_sinr(s.values, duplex);
    r.n_resampled = s.n_resampled;
    return r;
}

} // namespace fdnet
