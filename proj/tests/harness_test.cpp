#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fdnet/harness/compare.hpp"
#include "fdnet/harness/config.hpp"
#include "fdnet/harness/csv.hpp"
#include "fdnet/harness/manifest.hpp"
#include "fdnet/harness/reproduce.hpp"
#include "fdnet/harness/tasks.hpp"
#include "test_support.hpp"

using namespace fdnet;
using namespace fdnet::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fdnet_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
    const RunConfig c = parse_config("");
    const ScenarioParams p = c.scenario();
    EXPECT_EQ(p.alpha, 4.0);
    EXPECT_EQ(p.sigma2, 0.0);
    EXPECT_EQ(p.r_c, 200.0);
    EXPECT_DOUBLE_EQ(p.lambda_bs * std::numbers::pi * 200.0 * 200.0, 1.0);
    EXPECT_EQ(c.thresholds_db.size(), 17u);
    EXPECT_EQ(c.n_drops, 10000u);
}

TEST(Config, AssignmentsAndComments) {
    const RunConfig c = parse_config(
        "# comment line\n"
        "epsilon = 0.8   # trailing comment\n"
        "inter_bs_distance = 800\n"
        "p0_unit = W\n"
        "thresholds = -10:5:10\n"
        "rates = 0, 0.5, 2\n"
        "link = ul\n"
        "n_drops = 25\n");
    EXPECT_EQ(c.epsilon, 0.8);
    EXPECT_EQ(c.scenario().epsilon, 0.8);
    EXPECT_EQ(c.scenario().r_c, 400.0);
    EXPECT_EQ(c.units.p0_unit, PowerUnit::watt);
    EXPECT_EQ(c.thresholds_db, (std::vector<double>{-10, -5, 0, 5, 10}));
    EXPECT_EQ(c.rates, (std::vector<double>{0, 0.5, 2}));
    EXPECT_EQ(c.link, Link::ul);
    EXPECT_EQ(c.n_drops, 25u);
}

TEST(Config, RangeErrorNamesKeyAndLine) {
    const std::string e = error_of("alpha = 4\nepsilon = 1.5\n");
    EXPECT_NE(e.find("epsilon"), std::string::npos);
    EXPECT_NE(e.find(":2"), std::string::npos);
}

TEST(Config, ReportsEveryViolation) {
    const std::string e = error_of("bogus = 1\nepsilon = 2\nn_drops = -3\nalpha\n");
    EXPECT_NE(e.find("bogus"), std::string::npos);
    EXPECT_NE(e.find("epsilon"), std::string::npos);
    EXPECT_NE(e.find("n_drops"), std::string::npos);
    EXPECT_NE(e.find(":4"), std::string::npos);
}

TEST(Config, DuplicateAndUnknownKeys) {
    EXPECT_NE(error_of("seed = 1\nseed = 2\n").find("duplicate key 'seed'"), std::string::npos);
    EXPECT_NE(error_of("lamda_bs = 1e-6\n").find("unknown key 'lamda_bs'"), std::string::npos);
}

TEST(Config, GridAndGeometryValidation) {
    EXPECT_FALSE(error_of("thresholds = 5, 0\n").empty());
    EXPECT_FALSE(error_of("thresholds = 0:-1:5\n").empty());
    EXPECT_FALSE(error_of("r_c = 100\ninter_bs_distance = 400\n").empty());
    EXPECT_FALSE(error_of("n_drops = 0\n").empty());
    EXPECT_FALSE(error_of("alpha = 2\n").empty());
    EXPECT_FALSE(error_of("alpha = abc\n").empty());
}

TEST(Config, NeverPartiallyApplied) {
    RunConfig base;
    base.epsilon = 0.3;
    EXPECT_THROW(apply_assignments(base, {{"epsilon", "0.9", "x"}, {"alpha", "1", "y"}}), ConfigError);
    EXPECT_EQ(base.epsilon, 0.3);
}

TEST(Config, OverridesWinOverFile) {
    auto items = parse_assignments("epsilon = 0.2\n");
    items.push_back(parse_override("epsilon=0.8"));
    EXPECT_EQ(apply_assignments(RunConfig{}, items).epsilon, 0.8);
    EXPECT_THROW(parse_override("epsilon"), ConfigError);
}

TEST(Csv, NumberFormatting) {
    EXPECT_EQ(format_number(0.5042795236), "0.504279524");
    EXPECT_EQ(format_number(-40.0), "-40");
    EXPECT_EQ(format_number(1.5e-11), "1.5e-11");
    EXPECT_EQ(format_number(NAN), "nan");
    EXPECT_TRUE(std::isnan(parse_number("nan")));
    EXPECT_TRUE(std::isnan(parse_number("")));
    EXPECT_EQ(parse_number(" 2.5e3 "), 2500.0);
    EXPECT_THROW(parse_number("1,5"), ConfigError);
    EXPECT_THROW(parse_number("x"), ConfigError);
}

TEST(Csv, CurveRoundTrip) {
    const Curve c = {{-40.0, 0.992186981, NAN, NAN}, {0.0, 0.504279524, 0.5916, 0.00963414}, {5.0, 1e-300, 0.0, 0.0}};
    std::stringstream s;
    write_curve(s, c);
    const Curve back = read_curve(s);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back[i].x, c[i].x);
        EXPECT_EQ(back[i].analytic, c[i].analytic);
        EXPECT_EQ(std::isnan(back[i].sim), std::isnan(c[i].sim));
        if (!std::isnan(c[i].sim)) {
            EXPECT_EQ(back[i].sim, c[i].sim);
        }
    }
    std::stringstream again;
    write_curve(again, back);
    std::stringstream first;
    write_curve(first, c);
    EXPECT_EQ(again.str(), first.str());
}

TEST(Csv, MalformedInputs) {
    std::stringstream wrong_header("a,b,c,d\n1,2,3,4\n");
    EXPECT_THROW(read_curve(wrong_header), ConfigError);
    std::stringstream short_row("x,analytic,sim,sim_ci\n1,2,3\n");
    EXPECT_THROW(read_curve(short_row), ConfigError);
    std::stringstream bad_cell("x,analytic,sim,sim_ci\n1,abc,3,4\n");
    EXPECT_THROW(read_curve(bad_cell), ConfigError);
    std::stringstream empty("");
    EXPECT_THROW(read_curve(empty), ConfigError);
}

TEST(Manifest, RoundTripIsExact) {
    RunConfig c = parse_config("epsilon = 0.8\nr_c = 123.456789\np0_unit = W\nthresholds = -7.1, 0.3, 9.99\nseed = 18446744073709551615\n");
    const Json j = make_manifest(c);
    for (const auto& [k, v] : j.items()) EXPECT_FALSE(v.is_object()) << k;
    const RunConfig back = config_from_manifest(Json::parse(j.dump()));
    EXPECT_EQ(make_manifest(back).dump(), j.dump());
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.scenario().lambda_bs, c.scenario().lambda_bs);
    EXPECT_EQ(back.thresholds_db, c.thresholds_db);
}

TEST(Manifest, RecordsUnitsVersionAndResolvedValues) {
    RunConfig c;
    c.units.p0_unit = PowerUnit::watt;
    const Json j = make_manifest(c);
    EXPECT_EQ(j["p0_unit"], "W");
    EXPECT_EQ(j["p_d_unit"], "mW");
    EXPECT_EQ(j["version"], std::string(kVersion));
    EXPECT_EQ(j["r_c"], 200.0);
    EXPECT_DOUBLE_EQ(j["p0_linear"].get<double>(), std::pow(10.0, -9.4));
    EXPECT_EQ(j["n_drops"], 10000);
}

TEST(Manifest, RejectsUnknownAndNestedKeys) {
    Json j = make_manifest(RunConfig{});
    j["mystery"] = 1;
    EXPECT_THROW(config_from_manifest(j), ConfigError);
    Json k = make_manifest(RunConfig{});
    k["epsilon"] = Json::object();
    EXPECT_THROW(config_from_manifest(k), ConfigError);
}

TEST(Manifest, SimulatedCurveBitReproducesFromManifest) {
    RunConfig c = parse_config("link = ul\nepsilon = 0.8\np_d_dbm = 23\nthresholds = -40:10:0\nn_drops = 300\nseed = 9\n");
    const TaskResult a = run_coverage(c);
    const TaskResult b = run_coverage(config_from_manifest(Json::parse(a.manifest.dump())));
    std::stringstream sa, sb;
    write_curve(sa, a.curve);
    write_curve(sb, b.curve);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(Compare, IdenticalPasses) {
    const Curve c = oracle::reference_curve("fig2_hd.csv");
    for (double tol : {0.0, 1e-3}) {
        const auto r = compare_curves(c, c, tol);
        EXPECT_TRUE(r.pass);
        EXPECT_EQ(r.max_abs_dev, 0.0);
    }
}

TEST(Compare, OffsetFailsWithMaxDeviation) {
    Curve a = oracle::reference_curve("fig2_hd.csv"), b = a;
    for (auto& r : b) r.analytic += 0.1;
    const auto rep = compare_curves(a, b, 0.01);
    EXPECT_FALSE(rep.pass);
    EXPECT_NEAR(rep.max_abs_dev, 0.1, 1e-12);
    EXPECT_NEAR(rep.points[3].rel_dev, 0.1 / b[3].analytic, 1e-12);
    const Json j = rep.to_json();
    EXPECT_EQ(j["pass"], false);
    EXPECT_NEAR(j["max_abs_dev"].get<double>(), 0.1, 1e-12);
}

TEST(Compare, GridMismatchIsAnError) {
    Curve a = oracle::reference_curve("fig2_hd.csv"), b = a;
    b[2].x += 1.0;
    EXPECT_THROW(compare_curves(a, b, 1.0), ConfigError);
    b = a;
    b.pop_back();
    EXPECT_THROW(compare_curves(a, b, 1.0), ConfigError);
}

TEST(Compare, SimColumnUsesJointConfidenceInterval) {
    Curve a = {{0.0, NAN, 0.50, 0.01}}, b = {{0.0, NAN, 0.515, 0.01}};
    EXPECT_TRUE(compare_curves(a, b, 0.001, Column::sim).pass);
    EXPECT_TRUE(compare_curves(a, b, 0.001, Column::sim).points[0].ci_overlap);
    b[0].sim = 0.53;
    EXPECT_FALSE(compare_curves(a, b, 0.001, Column::sim).pass);
    b[0].sim_ci = NAN;
    b[0].sim = 0.505;
    EXPECT_FALSE(compare_curves(a, b, 0.001, Column::sim).pass);
    EXPECT_TRUE(compare_curves(a, b, 0.01, Column::sim).pass);
}

TEST(Compare, MissingOnOneSideFails) {
    Curve a = {{0.0, 0.5, NAN, NAN}, {1.0, NAN, NAN, NAN}}, b = {{0.0, NAN, NAN, NAN}, {1.0, NAN, NAN, NAN}};
    const auto r = compare_curves(a, b, 1.0);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.skipped, 1u);
}

TEST(Reproduce, Fig2AnalyticMatchesReferenceAndRoundTrips) {
    RunConfig run;
    run.method = MethodSel::analytic;
    const fs::path dir = scratch("fig2");
    const auto res = reproduce(Figure::fig2, dir, run);
    EXPECT_EQ(res.files.size(), 6u);
    for (const char* name : {"fig2_hd", "fig2_fd_eps0.2", "fig2_fd_eps0.8"}) {
        const Curve c = read_curve_file((dir / (std::string(name) + ".csv")).string());
        EXPECT_EQ(c.size(), 17u);
        EXPECT_TRUE(compare_curves(c, oracle::reference_curve(std::string(name) + ".csv"), 2e-3).pass) << name;
        const Json m = read_json((dir / (std::string(name) + ".json")).string());
        EXPECT_EQ(m["figure"], "fig2");
        const RunConfig back = config_from_manifest(m);
        EXPECT_EQ(back.method, MethodSel::analytic);
    }
    fs::remove_all(dir);
}

TEST(Reproduce, Fig4ConventionInManifestAndValues) {
    RunConfig run;
    run.method = MethodSel::analytic;
    const fs::path dir = scratch("fig4");
    reproduce(Figure::fig4, dir, run);
    const Json m = read_json((dir / "fig4_ul_r400_eps0.2.json").string());
    EXPECT_EQ(m["p0_unit"], "W");
    EXPECT_EQ(m["p_d_unit"], "mW");
    const double expect[] = {139.304, 79.543, 135.691, 83.155};
    int i = 0;
    for (const char* name : {"fig4_ul_r400_eps0.2", "fig4_ul_r400_eps0.8", "fig4_ul_r200_eps0.2", "fig4_ul_r200_eps0.8"}) {
        const Curve c = read_curve_file((dir / (std::string(name) + ".csv")).string());
        EXPECT_EQ(c.front().x, 23.0);
        EXPECT_NEAR(c.front().analytic, expect[i++], 0.01) << name;
    }
    fs::remove_all(dir);
}

TEST(Reproduce, Fig3PresetMatchesReference) {
    RunConfig run;
    run.method = MethodSel::analytic;
    for (const auto& preset : figure_presets(Figure::fig3, run)) {
        const TaskResult r = run_task(preset.config);
        EXPECT_EQ(r.curve.size(), 25u);
        EXPECT_TRUE(compare_curves(r.curve, oracle::reference_curve(preset.name + ".csv"), 1e-2).pass) << preset.name;
    }
}

TEST(Reproduce, PartialOutputsRemovedOnFailure) {
    RunConfig run;
    run.method = MethodSel::analytic;
    const fs::path dir = scratch("partial");
    fs::create_directories(dir / "fig2_fd_eps0.2.csv");  // blocks the second curve
    EXPECT_THROW(reproduce(Figure::fig2, dir, run), ConfigError);
    EXPECT_FALSE(fs::exists(dir / "fig2_hd.csv"));
    EXPECT_FALSE(fs::exists(dir / "fig2_hd.json"));
    fs::remove_all(dir);
}

TEST(Reproduce, FigureNames) {
    EXPECT_EQ(figure_from_string("table1"), Figure::table1);
    EXPECT_THROW(figure_from_string("fig9"), ConfigError);
    EXPECT_EQ(figure_presets(Figure::fig5, RunConfig{}).size(), 4u);
    EXPECT_EQ(figure_presets(Figure::table1, RunConfig{}).size(), 5u);
}

TEST(Tasks, HalfDuplexUplinkHasNoAnalyticModel) {
    RunConfig c = parse_config("link = ul\nduplex = hd\nmethod = analytic\n");
    EXPECT_THROW(run_coverage(c), ConfigError);
}

TEST(Tasks, RateCurveMatchesPublishedHalfDuplexPoint) {
    RunConfig c = parse_config("duplex = hd\nmethod = analytic\nrates = 0, 1, 2\n");
    const TaskResult r = run_rate(c);
    EXPECT_EQ(r.curve[0].analytic, 0.0);
    EXPECT_NEAR(r.curve[1].analytic, 0.49572, 5e-5);
    EXPECT_NEAR(r.manifest["mean_rate_analytic"].get<double>(), 2.02, 0.03);
}
