#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fdnet/errors.hpp"
#include "fdnet/harness/config.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"
#include "fdnet/harness/tasks.hpp"

namespace fdnet::harness {

enum class Figure { fig2, fig3, fig4, fig5, table1 };

inline std::string_view to_string(Figure f) {
    switch (f) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::table1: return "table1";
    }
    return "?";
}

inline Figure figure_from_string(std::string_view s) {
    for (Figure f : {Figure::fig2, Figure::fig3, Figure::fig4, Figure::fig5, Figure::table1})
        if (to_string(f) == s) return f;
    throw ConfigError("unknown figure '" + std::string(s) + "' (expected fig2, fig3, fig4, fig5 or table1)");
}

struct CurvePreset {
    std::string name;
    RunConfig config;
};

namespace detail {

// Shared by every preset: alpha 4, sigma2 0, P0 = -64 dBm, cell radius 200 m.
inline RunConfig preset_base(const RunConfig& run) {
    RunConfig c;
    c.r_c = 200.0;
    c.p0_dbm = -64.0;
    c.p_d_dbm = 40.0;
    c.method = run.method;
    c.n_drops = run.n_drops;
    c.seed = run.seed;
    c.workers = run.workers;
    return c;
}

inline std::string eps_label(double e) {
    std::ostringstream s;
    s << e;
    return s.str();
}

} // namespace detail

/// Curves of one figure with their conventions fixed. Only method, drop
/// count, seed and workers are taken from `run`.
inline std::vector<CurvePreset> figure_presets(Figure f, const RunConfig& run) {
    std::vector<CurvePreset> out;
    const RunConfig base = detail::preset_base(run);
    switch (f) {
    case Figure::fig2: {
        RunConfig c = base;
        c.task = Task::coverage;
        c.link = Link::dl;
        c.thresholds_db = RunConfig::grid(-40.0, 5.0, 40.0);
        c.duplex = Duplex::hd;
        out.push_back({"fig2_hd", c});
        c.duplex = Duplex::fd;
        for (double e : {0.2, 0.8}) {
            c.epsilon = e;
            out.push_back({"fig2_fd_eps" + detail::eps_label(e), c});
        }
        break;
    }
    case Figure::fig3: {
        RunConfig c = base;
        c.task = Task::coverage;
        c.link = Link::ul;
        c.duplex = Duplex::fd;
        c.thresholds_db = RunConfig::grid(-100.0, 5.0, 20.0);
        for (double pd : {40.0, 23.0})
            for (double e : {0.8, 0.2}) {
                c.epsilon = e;
                c.p_d_dbm = pd;
                out.push_back({"fig3_eps" + detail::eps_label(e) + "_pd" + std::to_string(static_cast<int>(pd)), c});
            }
        break;
    }
    case Figure::fig4: {
        RunConfig c = base;
        c.task = Task::inverse_sinr;
        c.duplex = Duplex::fd;
        c.units = {PowerUnit::watt, PowerUnit::milliwatt};
        c.p_d_grid = RunConfig::grid(23.0, 1.0, 40.0);
        c.p_d_dbm = 23.0;
        for (Link l : {Link::dl, Link::ul})
            for (double radius : {400.0, 200.0})
                for (double e : {0.2, 0.8}) {
                    c.link = l;
                    c.r_c = radius;
                    c.epsilon = e;
                    out.push_back({"fig4_" + std::string(to_string(l)) + "_r" + std::to_string(static_cast<int>(radius)) +
                                       "_eps" + detail::eps_label(e),
                                   c});
                }
        break;
    }
    case Figure::fig5: {
        RunConfig c = base;
        c.task = Task::rate;
        c.epsilon = 0.8;
        c.link = Link::ul;
        c.duplex = Duplex::fd;
        c.p_d_dbm = 23.0;
        c.rates = {0.0, 0.005, 0.01, 0.02, 0.04, 0.065, 0.1, 0.2, 0.3, 0.5, 1.0};
        for (double x = 2.0; x <= 15.0; x += 1.0) c.rates.push_back(x);
        out.push_back({"fig5_ul_eps0.8_pd23", c});
        c.link = Link::dl;
        c.rates = RunConfig::grid(0.0, 1.0, 15.0);
        c.p_d_dbm = 40.0;
        out.push_back({"fig5_dl_eps0.8_pd40", c});
        c.p_d_dbm = 23.0;
        out.push_back({"fig5_dl_eps0.8_pd23", c});
        c.duplex = Duplex::hd;
        c.p_d_dbm = 40.0;
        out.push_back({"fig5_hd", c});
        break;
    }
    case Figure::table1: {
        RunConfig c = base;
        c.task = Task::rate;
        c.duplex = Duplex::fd;
        for (double pd : {40.0, 23.0})
            for (double e : {0.2, 0.8}) {
                c.epsilon = e;
                c.p_d_dbm = pd;
                out.push_back({"fd_eps" + detail::eps_label(e) + "_pd" + std::to_string(static_cast<int>(pd)), c});
            }
        c.duplex = Duplex::hd;
        c.epsilon = 0.2;
        c.p_d_dbm = 40.0;
        out.push_back({"hd", c});
        break;
    }
    }
    return out;
}

inline constexpr const char* kTable1Header = "config,ul_edge_rate,ul_mean_rate,dl_edge_rate,dl_mean_rate";

struct RateRow {
    std::string config;
    double ul_edge = NAN, ul_mean = NAN, dl_edge = NAN, dl_mean = NAN;
};

/// Mean and 5% rates for the five rate-profile configurations, analytic
/// or simulated. The half-duplex row has no uplink entries.
inline std::vector<RateRow> rate_table(const RunConfig& run, bool sim) {
    std::vector<RateRow> rows;
    for (const auto& preset : figure_presets(Figure::table1, run)) {
        RateRow row{preset.name};
        for (Link l : {Link::ul, Link::dl}) {
            if (l == Link::ul && preset.config.duplex == Duplex::hd) continue;
            const ScenarioParams p = preset.config.scenario();
            double mean = NAN, edge = NAN;
            if (sim) {
                const RateProfile prof = estimate_rate_stats(p, l, preset.config.duplex, preset.config.sim_options());
                mean = prof.mean;
                edge = prof.edge;
            } else {
                const CoverageFn cov = analytic_coverage(p, l, preset.config.duplex, true);
                mean = mean_rate(cov, preset.config.duplex, rate_mean_options(l, preset.config.duplex));
                edge = cell_edge_rate(cov, preset.config.duplex);
            }
            (l == Link::ul ? row.ul_mean : row.dl_mean) = mean;
            (l == Link::ul ? row.ul_edge : row.dl_edge) = edge;
        }
        rows.push_back(row);
    }
    return rows;
}

inline Table rate_table_csv(const std::vector<RateRow>& rows) {
    Table t;
    t.header = split(kTable1Header, ',');
    for (const auto& r : rows)
        t.rows.push_back({r.config, format_number(r.ul_edge), format_number(r.ul_mean), format_number(r.dl_edge),
                          format_number(r.dl_mean)});
    return t;
}

namespace detail {

// Removes every regular file registered so far unless released.
class OutputGuard {
public:
    ~OutputGuard() {
        if (released_) return;
        std::error_code ec;
        for (const auto& f : files_)
            if (std::filesystem::is_regular_file(f, ec)) std::filesystem::remove(f, ec);
    }
    void add(std::filesystem::path p) { files_.push_back(std::move(p)); }
    void release() { released_ = true; }
    const std::vector<std::filesystem::path>& files() const { return files_; }

private:
    std::vector<std::filesystem::path> files_;
    bool released_ = false;
};

inline void write_table_file(const std::string& path, const Table& t) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    write_table(f, t);
    if (!f) throw ConfigError("write failed: " + path);
}

} // namespace detail

struct ReproduceResult {
    std::vector<std::string> files;
    bool degenerate_warning = false;
};

/// Writes one CSV and one manifest per curve of the figure into out_dir.
/// On any failure the files already written are removed.
inline ReproduceResult reproduce(Figure f, const std::filesystem::path& out_dir, const RunConfig& run) {
    std::filesystem::create_directories(out_dir);
    detail::OutputGuard guard;
    ReproduceResult res;
    if (f == Figure::table1) {
        const std::vector<std::pair<std::string, bool>> variants = {{"table1", false}, {"table1_sim", true}};
        for (const auto& [name, sim] : variants) {
            if (sim ? !wants_sim(run.method) : !wants_analytic(run.method)) continue;
            const auto csv = out_dir / (name + ".csv");
            guard.add(csv);
            detail::write_table_file(csv.string(), rate_table_csv(rate_table(run, sim)));
        }
        RunConfig base = detail::preset_base(run);
        base.task = Task::reproduce;
        Json m = make_manifest(base);
        m["figure"] = "table1";
        const auto json = out_dir / "table1.json";
        guard.add(json);
        write_manifest(m, json.string());
    } else {
        for (auto preset : figure_presets(f, run)) {
            const auto csv = out_dir / (preset.name + ".csv");
            preset.config.out = csv.string();
            TaskResult r = run_task(preset.config);
            r.manifest["out"] = preset.config.out;
            r.manifest["figure"] = std::string(to_string(f));
            r.manifest["curve"] = preset.name;
            res.degenerate_warning = res.degenerate_warning || r.degenerate_warning;
            guard.add(csv);
            write_curve_file(csv.string(), r.curve);
            const auto json = out_dir / (preset.name + ".json");
            guard.add(json);
            write_manifest(r.manifest, json.string());
        }
    }
    for (const auto& p : guard.files()) res.files.push_back(p.string());
    guard.release();
    return res;
}

} // namespace fdnet::harness
