#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"

#ifndef FDNET_CLI
#error "FDNET_CLI must name the built command-line tool"
#endif

namespace fs = std::filesystem;
using namespace fdnet::harness;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fdnet_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + FDNET_CLI + "\" " + args + " >\"" + (workdir() / "stdout.txt").string() +
                            "\" 2>\"" + (workdir() / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

} // namespace

TEST(Cli, CoverageToStdout) {
    ASSERT_EQ(run("coverage --method analytic --set duplex=hd --set thresholds=-10,0,10"), 0);
    const std::string out = slurp(workdir() / "stdout.txt");
    EXPECT_EQ(out.substr(0, out.find('\n')), "x,analytic,sim,sim_ci");
    std::stringstream s(out);
    const Curve c = read_curve(s);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_NEAR(c[1].analytic, 0.50428, 5e-5);
}

TEST(Cli, OutWritesCsvAndManifest) {
    ASSERT_EQ(run("coverage --method sim --drops 200 --seed 5 --set link=ul --set epsilon=0.8 --out " + path("ul.csv")), 0);
    ASSERT_TRUE(fs::exists(path("ul.json")));
    const Json m = read_json(path("ul.json"));
    EXPECT_EQ(m["seed"], 5);
    EXPECT_EQ(m["n_drops"], 200);
    EXPECT_EQ(m["link"], "ul");

    ASSERT_EQ(run("coverage --manifest " + path("ul.json") + " --out " + path("ul_again.csv")), 0);
    EXPECT_EQ(slurp(path("ul.csv")), slurp(path("ul_again.csv")));
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    std::ofstream(path("run.cfg")) << "duplex = hd\nmethod = analytic\nthresholds = 0\nseed = 3\n";
    ASSERT_EQ(run("coverage --config " + path("run.cfg") + " --seed 11 --out " + path("cfg.csv")), 0);
    const Json m = read_json(path("cfg.json"));
    EXPECT_EQ(m["seed"], 11);
    EXPECT_EQ(m["duplex"], "hd");
}

TEST(Cli, UsageAndConfigErrorsExitOne) {
    EXPECT_EQ(run("no-such-command"), 1);
    EXPECT_EQ(run("coverage --method nope"), 1);
    EXPECT_EQ(run("coverage --set epsilon=1.5"), 1);
    EXPECT_NE(slurp(workdir() / "stderr.txt").find("epsilon"), std::string::npos);
    EXPECT_EQ(run("coverage --config " + path("missing.cfg")), 1);
    EXPECT_EQ(run("reproduce fig9"), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, NumericalFailureExitsTwo) {
    // A 1 m window almost never holds a base station.
    EXPECT_EQ(run("coverage --method sim --drops 1 --set window_len=1 --set thresholds=0"), 2);
}

TEST(Cli, CompareExitCodes) {
    const Curve a = {{0.0, 0.5, NAN, NAN}, {1.0, 0.4, NAN, NAN}};
    const Curve b = {{0.0, 0.6, NAN, NAN}, {1.0, 0.4, NAN, NAN}};
    const Curve g = {{0.0, 0.5, NAN, NAN}, {2.0, 0.4, NAN, NAN}};
    write_curve_file(path("a.csv"), a);
    write_curve_file(path("b.csv"), b);
    write_curve_file(path("g.csv"), g);
    EXPECT_EQ(run("compare " + path("a.csv") + " " + path("a.csv") + " --tol 0"), 0);
    EXPECT_EQ(run("compare " + path("a.csv") + " " + path("b.csv") + " --tol 0.01 --report " + path("r.json")), 3);
    const Json r = read_json(path("r.json"));
    EXPECT_EQ(r["pass"], false);
    EXPECT_NEAR(r["max_abs_dev"].get<double>(), 0.1, 1e-12);
    EXPECT_EQ(run("compare " + path("a.csv") + " " + path("b.csv") + " --tol 0.2"), 0);
    EXPECT_EQ(run("compare " + path("a.csv") + " " + path("g.csv") + " --tol 1"), 1);
    EXPECT_EQ(run("compare " + path("a.csv") + " " + path("nothing.csv") + " --tol 1"), 1);
}

TEST(Cli, ReproduceWritesFigureFiles) {
    ASSERT_EQ(run("reproduce fig3 --method analytic --out " + path("fig3")), 0);
    for (const char* n : {"fig3_eps0.8_pd40", "fig3_eps0.2_pd40", "fig3_eps0.8_pd23", "fig3_eps0.2_pd23"}) {
        EXPECT_TRUE(fs::exists(path("fig3/") + n + ".csv")) << n;
        EXPECT_TRUE(fs::exists(path("fig3/") + n + ".json")) << n;
    }
}
