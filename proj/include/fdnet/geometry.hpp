#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/rng.hpp"
#include "fdnet/scenario.hpp"

namespace fdnet {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// One sampled drop of the network.
///
/// Exactly one downlink user and one uplink user per cell share the
/// resource block. Users of neighbouring cells may overlap.
struct NetworkRealization {
    std::vector<Point> bs;
    std::vector<Point> dl_user;
    std::vector<Point> ul_user;
    std::size_t tagged = 0;

    std::size_t size() const { return bs.size(); }
};

// Homogeneous PPP on the square [-L/2, L/2]^2.
template <class Rng>
std::vector<Point> sample_ppp(double lambda, double window_len, Rng& rng) {
    if (!(lambda > 0.0)) throw ConfigError("PPP density must be > 0");
    if (!(window_len > 0.0)) throw ConfigError("PPP window must be > 0");
    std::poisson_distribution<std::uint64_t> count(lambda * window_len * window_len);
    std::uniform_real_distribution<double> coord(-window_len / 2.0, window_len / 2.0);
    std::vector<Point> pts(count(rng));
    for (auto& p : pts) {
        p.x = coord(rng);
        p.y = coord(rng);
    }
    return pts;
}

inline std::vector<Point> sample_ppp(double lambda, double window_len, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return sample_ppp(lambda, window_len, rng);
}

// Uniform point in the disk, radius by inverse CDF r = R sqrt(u).
template <class Rng>
Point sample_in_disk(Point center, double r_c, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = r_c * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    return {center.x + r * std::cos(th), center.y + r * std::sin(th)};
}

template <class Rng>
std::vector<Point> sample_users_in_disk(Point center, double r_c, std::size_t n, Rng& rng) {
    if (!(r_c > 0.0)) throw ConfigError("cluster radius must be > 0");
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_in_disk(center, r_c, rng));
    return out;
}

inline std::vector<Point> sample_users_in_disk(Point center, double r_c, std::size_t n, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return sample_users_in_disk(center, r_c, n, rng);
}

// Density of the user-to-parent distance, 2r/R^2 on [0, R].
inline double serving_distance_pdf(double r, double r_c) {
    if (!(r_c > 0.0)) throw ConfigError("cluster radius must be > 0");
    return (r >= 0.0 && r <= r_c) ? 2.0 * r / (r_c * r_c) : 0.0;
}

inline double serving_distance_cdf(double r, double r_c) {
    if (r <= 0.0) return 0.0;
    if (r >= r_c) return 1.0;
    return (r * r) / (r_c * r_c);
}

// Distance between two users at radii r_d, r_u about the same BS separated by angle gamma.
inline double pair_distance(double r_d, double r_u, double gamma) {
    const double d2 = r_d * r_d + r_u * r_u - 2.0 * r_d * r_u * std::cos(gamma);
    return std::sqrt(std::max(d2, 0.0));
}

inline std::size_t nearest_to(const std::vector<Point>& pts, Point target) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = std::hypot(pts[i].x - target.x, pts[i].y - target.y);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

/// Samples BSs, then one DL and one UL user per cell. The tagged cell is the
/// BS nearest the window centre. Throws GeometryError on an empty window.
template <class Rng>
NetworkRealization sample_network(const ScenarioParams& p, Rng& rng) {
    NetworkRealization net;
    net.bs = sample_ppp(p.lambda_bs, p.window_len, rng);
    if (net.bs.empty()) throw GeometryError("no base station in the simulation window");
    net.dl_user.reserve(net.bs.size());
    net.ul_user.reserve(net.bs.size());
    for (const auto& b : net.bs) net.dl_user.push_back(sample_in_disk(b, p.r_c, rng));
    for (const auto& b : net.bs) net.ul_user.push_back(sample_in_disk(b, p.r_c, rng));
    net.tagged = nearest_to(net.bs, Point{});
    return net;
}

} // namespace fdnet
