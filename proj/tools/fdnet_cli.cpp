// fdnet: command-line front end for coverage, inverse-SINR and rate
// computations, figure reproduction and curve comparison.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdnet/errors.hpp"
#include "fdnet/harness/compare.hpp"
#include "fdnet/harness/config.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"
#include "fdnet/harness/reproduce.hpp"
#include "fdnet/harness/tasks.hpp"
#include "fdnet/version.hpp"

namespace {

using namespace fdnet;
using namespace fdnet::harness;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kCompareFail = 3 };

struct CommonFlags {
    std::string config;
    std::string manifest;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> drops;
    std::optional<unsigned> workers;
    std::string out;
    std::string method;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "key = value configuration file");
    cmd->add_option("--manifest", f.manifest, "re-run from a JSON manifest");
    cmd->add_option("--set", f.sets, "override one key (key=value); repeatable");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--drops", f.drops, "Monte Carlo drop count");
    cmd->add_option("--workers", f.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out", f.out, "output path");
    cmd->add_option("--method", f.method, "sim|analytic|both")->check(CLI::IsMember({"sim", "analytic", "both"}));
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// Defaults, then file or manifest, then command-line flags.
RunConfig resolve(const CommonFlags& f, Task task) {
    if (!f.config.empty() && !f.manifest.empty()) throw ConfigError("--config and --manifest are mutually exclusive");
    RunConfig base;
    std::vector<Assignment> items;
    std::vector<std::string> errors;
    if (!f.manifest.empty()) {
        base = config_from_manifest(read_json(f.manifest), f.manifest);
    } else if (!f.config.empty()) {
        items = fdnet::harness::detail::scan_assignments(slurp(f.config), f.config, errors);
    }
    for (const auto& s : f.sets) items.push_back(parse_override(s));
    auto flag = [&](const char* key, const std::string& v) { items.push_back({key, v, std::string("--") + key}); };
    if (f.seed) flag("seed", std::to_string(*f.seed));
    if (f.drops) items.push_back({"n_drops", std::to_string(*f.drops), "--drops"});
    if (f.workers) flag("workers", std::to_string(*f.workers));
    if (!f.out.empty()) flag("out", f.out);
    if (!f.method.empty()) flag("method", f.method);
    RunConfig c;
    try {
        c = apply_assignments(base, items);
    } catch (const ConfigError& e) {
        errors.emplace_back(e.what());
    }
    if (!errors.empty()) throw ConfigError(fdnet::harness::detail::join_lines(errors));
    c.task = task;
    return c;
}

void warn_degenerate(bool warn) {
    if (warn)
        std::cerr << "warning: more than " << kDegenerateWarnFraction * 100.0
                  << "% of drops were redrawn for a transmitter closer than the minimum distance\n";
}

int run_curve(const CommonFlags& f, Task task, const std::string& manifest_out) {
    const RunConfig c = resolve(f, task);
    const TaskResult r = run_task(c);
    warn_degenerate(r.degenerate_warning);
    if (c.out.empty()) {
        write_curve(std::cout, r.curve);
    } else {
        write_curve_file(c.out, r.curve);
        const std::string m = manifest_out.empty() ? std::filesystem::path(c.out).replace_extension(".json").string()
                                                   : manifest_out;
        write_manifest(r.manifest, m);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage, rate and inverse-SINR analysis of full-duplex cellular networks"};
    app.set_version_flag("--version", std::string(fdnet::kVersion));
    app.require_subcommand(1);

    CommonFlags cov_f, inv_f, rate_f, rep_f;
    std::string cov_m, inv_m, rate_m;

    auto* cov = app.add_subcommand("coverage", "P[SINR > T] over a threshold grid");
    add_common(cov, cov_f);
    cov->add_option("--manifest-out", cov_m, "manifest path (default: --out with .json)");

    auto* inv = app.add_subcommand("inverse-sinr", "mean inverse SINR (dB) against downlink power");
    add_common(inv, inv_f);
    inv->add_option("--manifest-out", inv_m, "manifest path (default: --out with .json)");

    auto* rate = app.add_subcommand("rate", "rate CDF with mean and 5% rates");
    add_common(rate, rate_f);
    rate->add_option("--manifest-out", rate_m, "manifest path (default: --out with .json)");

    std::string figure;
    auto* rep = app.add_subcommand("reproduce", "regenerate the data behind one figure or table");
    rep->add_option("figure", figure, "fig2|fig3|fig4|fig5|table1")->required();
    add_common(rep, rep_f);

    std::string file_a, file_b, column = "analytic", report_path;
    double tol = 0.0;
    auto* cmp = app.add_subcommand("compare", "compare one column of two curve CSVs on a shared x grid");
    cmp->add_option("a", file_a, "first CSV")->required();
    cmp->add_option("b", file_b, "second CSV")->required();
    cmp->add_option("--tol", tol, "absolute tolerance")->required();
    cmp->add_option("--column", column, "analytic|sim")->check(CLI::IsMember({"analytic", "sim"}));
    cmp->add_option("--report", report_path, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*cov) return run_curve(cov_f, Task::coverage, cov_m);
        if (*inv) return run_curve(inv_f, Task::inverse_sinr, inv_m);
        if (*rate) return run_curve(rate_f, Task::rate, rate_m);
        if (*rep) {
            const Figure fig = figure_from_string(figure);
            RunConfig c = resolve(rep_f, Task::reproduce);
            const std::string dir = c.out.empty() ? "out/" + figure : c.out;
            const ReproduceResult r = reproduce(fig, dir, c);
            warn_degenerate(r.degenerate_warning);
            for (const auto& f : r.files) std::cout << f << '\n';
            return kOk;
        }
        if (*cmp) {
            const ComparisonReport r = compare_files(file_a, file_b, tol, column_from_string(column));
            const std::string text = r.to_json().dump(2);
            if (report_path.empty()) {
                std::cout << text << '\n';
            } else {
                std::ofstream f(report_path);
                if (!f) throw ConfigError("cannot write " + report_path);
                f << text << '\n';
            }
            if (!r.pass)
                std::cerr << "comparison failed: max deviation " << format_number(r.max_abs_dev) << " at x = "
                          << format_number(r.max_abs_dev_x) << " exceeds " << format_number(tol) << '\n';
            return r.pass ? kOk : kCompareFail;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
