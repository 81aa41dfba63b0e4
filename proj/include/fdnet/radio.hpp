#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/geometry.hpp"
#include "fdnet/rng.hpp"
#include "fdnet/scenario.hpp"

namespace fdnet {

enum class Link { dl, ul };
enum class Duplex { hd, fd };
enum class PathLossModel { plain, regularized };

inline std::string_view to_string(Link l) { return l == Link::dl ? "dl" : "ul"; }
inline std::string_view to_string(Duplex d) { return d == Duplex::hd ? "hd" : "fd"; }

// x^-alpha, or (1+x)^-alpha for the regularized model. Plain loss at x=0 is singular.
inline double path_loss(double x, double alpha, PathLossModel model = PathLossModel::plain) {
    if (x < 0.0) throw GeometryError("negative link distance");
    if (model == PathLossModel::regularized) return std::pow(1.0 + x, -alpha);
    if (x == 0.0) throw GeometryError("zero link distance under plain path loss");
    return std::pow(x, -alpha);
}

// Rayleigh power gain |h|^2 ~ Exp(1).
template <class Rng>
double draw_fading(Rng& rng) {
    return std::exponential_distribution<double>(1.0)(rng);
}

inline double draw_fading(std::uint64_t seed) {
    auto rng = make_engine(seed);
    return draw_fading(rng);
}

// Fractional power control min(P_max, P_0 r^(alpha eps)).
inline double uplink_power(double r_u, const ScenarioParams& p) {
    if (r_u < 0.0) throw GeometryError("negative uplink user distance");
    return std::min(p.p_max_u, p.p_0 * std::pow(r_u, p.alpha * p.epsilon));
}

// The uncapped law used by the analysis.
inline double uplink_power_uncapped(double r_u, const ScenarioParams& p) {
    return p.p_0 * std::pow(r_u, p.alpha * p.epsilon);
}

/// Fading gains seen by one receiver: from every BS and from every UL user,
/// indexed like the realization.
struct LinkFading {
    std::vector<double> from_bs;
    std::vector<double> from_ul;

    static LinkFading unit(std::size_t n) { return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)}; }

    template <class Rng>
    static LinkFading draw(std::size_t n, Rng& rng) {
        LinkFading f;
        f.from_bs.resize(n);
        f.from_ul.resize(n);
        for (auto& h : f.from_bs) h = draw_fading(rng);
        for (auto& h : f.from_ul) h = draw_fading(rng);
        return f;
    }
};

struct LinkBudget {
    double signal = 0.0;
    double same_cell_cross_interference = 0.0;
    double other_cell_dl = 0.0;
    double other_cell_ul = 0.0;
    double noise = 0.0;

    double interference() const { return same_cell_cross_interference + other_cell_dl + other_cell_ul; }

    // +inf when nothing sits in the denominator.
    double sinr() const {
        const double den = noise + interference();
        if (den == 0.0) return signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        return signal / den;
    }
};

/// SINR budget of the tagged cell's downlink user.
///
/// Half duplex removes every uplink term. Full duplex adds the co-cell
/// uplink user and the uplink users of all other cells. The DL user's own
/// self-interference is taken as fully cancelled.
inline LinkBudget downlink_budget(const NetworkRealization& net, const LinkFading& h, const ScenarioParams& p,
                                  Duplex duplex, PathLossModel model = PathLossModel::plain) {
    const std::size_t t = net.tagged;
    if (t >= net.size()) throw GeometryError("tagged cell out of range");
    const Point rx = net.dl_user[t];
    LinkBudget b;
    b.noise = p.sigma2;
    b.signal = p.p_d * h.from_bs[t] * path_loss(distance(rx, net.bs[t]), p.alpha, model);
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (x == t) continue;
        b.other_cell_dl += p.p_d * h.from_bs[x] * path_loss(distance(rx, net.bs[x]), p.alpha, model);
    }
    if (duplex == Duplex::fd) {
        for (std::size_t x = 0; x < net.size(); ++x) {
            const double pu = uplink_power(distance(net.ul_user[x], net.bs[x]), p);
            const double term = pu * h.from_ul[x] * path_loss(distance(rx, net.ul_user[x]), p.alpha, model);
            (x == t ? b.same_cell_cross_interference : b.other_cell_ul) += term;
        }
    }
    return b;
}

/// SINR budget of the tagged cell's uplink user at its BS.
///
/// Full duplex: other BSs' downlink plus other cells' uplink users; the
/// serving BS's own downlink is cancelled. Half duplex keeps only the
/// other-cell uplink users.
inline LinkBudget uplink_budget(const NetworkRealization& net, const LinkFading& h, const ScenarioParams& p,
                                Duplex duplex, PathLossModel model = PathLossModel::plain) {
    const std::size_t t = net.tagged;
    if (t >= net.size()) throw GeometryError("tagged cell out of range");
    const Point rx = net.bs[t];
    LinkBudget b;
    b.noise = p.sigma2;
    const double r_u = distance(net.ul_user[t], rx);
    b.signal = uplink_power(r_u, p) * h.from_ul[t] * path_loss(r_u, p.alpha, model);
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (x == t) continue;
        const double pu = uplink_power(distance(net.ul_user[x], net.bs[x]), p);
        b.other_cell_ul += pu * h.from_ul[x] * path_loss(distance(rx, net.ul_user[x]), p.alpha, model);
        if (duplex == Duplex::fd)
            b.other_cell_dl += p.p_d * h.from_bs[x] * path_loss(distance(rx, net.bs[x]), p.alpha, model);
    }
    return b;
}

inline double downlink_sinr(const NetworkRealization& net, const LinkFading& h, const ScenarioParams& p,
                            Duplex duplex = Duplex::fd, PathLossModel model = PathLossModel::plain) {
    return downlink_budget(net, h, p, duplex, model).sinr();
}

inline double uplink_sinr(const NetworkRealization& net, const LinkFading& h, const ScenarioParams& p,
                          Duplex duplex = Duplex::fd, PathLossModel model = PathLossModel::plain) {
    return uplink_budget(net, h, p, duplex, model).sinr();
}

inline LinkBudget link_budget(Link link, const NetworkRealization& net, const LinkFading& h, const ScenarioParams& p,
                              Duplex duplex, PathLossModel model = PathLossModel::plain) {
    return link == Link::dl ? downlink_budget(net, h, p, duplex, model) : uplink_budget(net, h, p, duplex, model);
}

// Distance from the link's receiver to the closest transmitter of its full-duplex
// budget. Independent of the duplex mode so HD and FD runs resample identically.
inline double closest_transmitter(Link link, const NetworkRealization& net) {
    const std::size_t t = net.tagged;
    double best = INFINITY;
    if (link == Link::dl) {
        const Point rx = net.dl_user[t];
        for (const auto& b : net.bs) best = std::min(best, distance(rx, b));
        for (const auto& u : net.ul_user) best = std::min(best, distance(rx, u));
    } else {
        const Point rx = net.bs[t];
        for (std::size_t x = 0; x < net.size(); ++x) {
            best = std::min(best, distance(rx, net.ul_user[x]));
            if (x != t) best = std::min(best, distance(rx, net.bs[x]));
        }
    }
    return best;
}

} // namespace fdnet
