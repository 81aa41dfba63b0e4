#pragma once

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"

#include "fdnet/errors.hpp"
#include "fdnet/harness/config.hpp"
#include "fdnet/version.hpp"

namespace fdnet::harness {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string exact_list(const std::vector<double>& g) {
    std::string s;
    for (double v : g) s += (s.empty() ? "" : ",") + exact(v);
    return s;
}

// Keys written for the reader's benefit; ignored on reload.
inline const std::set<std::string, std::less<>>& informational_keys() {
    static const std::set<std::string, std::less<>> keys = {
        "version", "lambda_bs_resolved", "r_c_resolved", "p_d_linear", "p0_linear", "p_max_linear",
        "saturation_distance", "figure", "curve", "x_label", "n_resampled", "degenerate_warning",
        "mean_rate_analytic", "edge_rate_analytic", "mean_rate_sim", "edge_rate_sim", "outputs"};
    return keys;
}

} // namespace detail

/// Flat JSON record of a resolved run. Every configuration key is present,
/// so the manifest alone re-creates the run.
inline Json make_manifest(const RunConfig& c) {
    const ScenarioParams p = c.scenario();
    Json j;
    j["version"] = std::string(kVersion);
    j["task"] = std::string(to_string(c.task));
    j["alpha"] = c.alpha;
    j["r_c"] = p.r_c;
    j["lambda_bs"] = p.lambda_bs;
    j["p_d_dbm"] = c.p_d_dbm;
    j["p0_dbm"] = c.p0_dbm;
    j["p_max_dbm"] = c.p_max_dbm;
    j["p0_unit"] = std::string(to_string(c.units.p0_unit));
    j["p_d_unit"] = std::string(to_string(c.units.p_d_unit));
    j["epsilon"] = c.epsilon;
    j["sigma2"] = c.sigma2;
    j["window_len"] = c.window_len;
    j["link"] = std::string(to_string(c.link));
    j["duplex"] = std::string(to_string(c.duplex));
    j["method"] = std::string(to_string(c.method));
    j["thresholds"] = c.thresholds_db;
    j["rates"] = c.rates;
    j["p_d_grid"] = c.p_d_sweep();
    j["n_drops"] = c.n_drops;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out"] = c.out;
    j["r_c_resolved"] = p.r_c;
    j["lambda_bs_resolved"] = p.lambda_bs;
    j["p_d_linear"] = p.p_d;
    j["p0_linear"] = p.p_0;
    j["p_max_linear"] = p.p_max_u;
    j["saturation_distance"] = p.saturation_distance();
    return j;
}

/// Inverse of make_manifest. Unknown keys are rejected; informational keys
/// are skipped. Values go through the same validation as a config file.
inline RunConfig config_from_manifest(const Json& j, const std::string& source = "manifest") {
    if (!j.is_object()) throw ConfigError(source + ": manifest must be a JSON object");
    std::vector<Assignment> items;
    std::vector<std::string> errors;
    for (const auto& [key, v] : j.items()) {
        if (detail::informational_keys().contains(key)) continue;
        if (v.is_object()) {
            errors.push_back(source + ": " + key + ": nested objects are not allowed");
            continue;
        }
        std::string text;
        if (v.is_array()) {
            std::vector<double> g;
            for (const auto& e : v) {
                if (!e.is_number()) {
                    errors.push_back(source + ": " + key + ": array entries must be numbers");
                    break;
                }
                g.push_back(e.get<double>());
            }
            text = detail::exact_list(g);
        } else if (v.is_number_unsigned()) {
            text = std::to_string(v.get<unsigned long long>());
        } else if (v.is_number_integer()) {
            text = std::to_string(v.get<long long>());
        } else if (v.is_number()) {
            text = detail::exact(v.get<double>());
        } else if (v.is_string()) {
            text = v.get<std::string>();
        } else {
            errors.push_back(source + ": " + key + ": unsupported value type");
            continue;
        }
        items.push_back({key, text, source});
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    // The manifest records an explicit r_c, so the geometry must not also come from the defaults.
    RunConfig base;
    base.inter_bs_distance.reset();
    return apply_assignments(base, items);
}

inline void write_manifest(const Json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << j.dump(2) << '\n';
    if (!f) throw ConfigError("write failed: " + path);
}

inline Json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace fdnet::harness
