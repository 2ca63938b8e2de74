#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "frontlab/harness.hpp"

using namespace frontlab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.x_lo = -60.0;
    cfg.x_hi = 60.0;
    cfg.T = 10.0;
    cfg.snapshot_every = 0.5;
    return cfg;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("frontlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config: lossless round-trip through serialize/parse") {
    ExperimentConfig cfg;
    cfg.r = 0.4;
    cfg.k = 2.0;
    cfg.theta = 0.6;
    cfg.L = 7.5;
    cfg.c = -1.25;
    cfg.x_lo = -120.0;
    cfg.x_hi = 90.0;
    cfg.dx = 0.05;
    cfg.dt = 0.005;
    cfg.bc = "dirichlet";
    cfg.grow = "fixed";
    cfg.grow_margin = 25.0;
    cfg.grow_activity = 1e-80;
    cfg.height = 0.55;
    cfg.width = 17.0;
    cfg.center = 3.25;
    cfg.sigma = 1.5;
    cfg.T = 123.0;
    cfg.snapshot_every = 0.25;
    AnalysisBlock an;
    an.levels = {0.1, 0.5, 0.9};
    an.side = "both";
    an.fit_t1 = 60.0;
    an.fit_t2 = 123.0;
    an.fit_logdelay = true;
    cfg.analysis = an;

    const std::string text = serialize_config(cfg);
    const ExperimentConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.r == cfg.r);
    CHECK(back.grow_activity == cfg.grow_activity);
    CHECK(back.bc == "dirichlet");
    REQUIRE(back.analysis.has_value());
    CHECK(back.analysis->levels == an.levels);
    CHECK(back.analysis->side == "both");
    CHECK(back.analysis->fit_logdelay);

    // a config without an analysis block round-trips without growing one
    ExperimentConfig plain;
    CHECK(!parse_config(serialize_config(plain)).analysis.has_value());
}

TEST_CASE("config: unknown keys and malformed input name the offender") {
    CHECK_THROWS_WITH_AS(parse_config("[reaction]\nfoo = 1\n"),
                         doctest::Contains("foo"), invalid_parameter);
    CHECK_THROWS_WITH_AS(parse_config("[bogus]\nr = 1\n"),
                         doctest::Contains("bogus"), invalid_parameter);
    CHECK_THROWS_WITH_AS(parse_config("[problem]\ndx = abc\n"),
                         doctest::Contains("dx"), invalid_parameter);
    CHECK_THROWS_AS(parse_config("r = 1\n"), invalid_parameter);         // outside section
    CHECK_THROWS_AS(parse_config("[problem]\njust words\n"), invalid_parameter);

    ExperimentConfig cfg;
    cfg.bc = "periodic";
    CHECK_THROWS_WITH_AS(cfg.make_problem(), doctest::Contains("periodic"),
                         invalid_parameter);
    cfg.bc = "neumann";
    cfg.grow = "shrink";
    CHECK_THROWS_AS(cfg.make_problem(), invalid_parameter);
}

TEST_CASE("run: minimal config writes the run directory with manifest") {
    const fs::path dir = fresh_dir("minimal");
    const RunManifest man = run(small_config(), dir);

    for (const char* name : {"config.txt", "snapshots.csv", "meta.json", "events.log"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir / name));
        CHECK(man.checksums.count(name) == 1);
    }
    CHECK(fs::exists(dir / "manifest.json")); // written last: marks a complete run
    CHECK(!man.config_digest.empty());

    const std::string snaps = slurp(dir / "snapshots.csv");
    CHECK(snaps.rfind("t,x,u\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("run: analysis block adds trace and fit files") {
    ExperimentConfig cfg = small_config();
    cfg.T = 60.0;
    AnalysisBlock an;
    an.levels = {0.5};
    an.side = "left";
    cfg.analysis = an;

    const fs::path dir = fresh_dir("analysis");
    const RunManifest man = run(cfg, dir);
    CHECK(fs::exists(dir / "trace_left_0.5.csv"));
    CHECK(fs::exists(dir / "fits.csv"));
    CHECK(man.checksums.count("fits.csv") == 1);

    const std::string fits = slurp(dir / "fits.csv");
    CHECK(fits.rfind("level,side,kind,a,b,c0,stderr\n", 0) == 0);

    // plot-data extraction from the finished directory
    const std::string heat = emit_plot_data(dir, PlotKind::spacetime_heat);
    CHECK(heat.rfind("# t x u\n", 0) == 0);
    CHECK(heat.size() > 100);

    const std::string tr = emit_plot_data(dir, PlotKind::trace);
    CHECK(tr.rfind("# t position\n", 0) == 0);

    const WaveProfile wave = bistable_front(build_cubic_bistable(1.0, 0.3));
    const std::string ov = emit_plot_data(dir, PlotKind::profile_overlay, &wave, 0.0, 0.0);
    CHECK(ov.rfind("# x u phi_shifted\n", 0) == 0);
    CHECK_THROWS_AS(emit_plot_data(dir, PlotKind::profile_overlay), invalid_parameter);
    fs::remove_all(dir);
}

TEST_CASE("run: identical configs reproduce identical manifests") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const ExperimentConfig cfg = small_config();
    const RunManifest m1 = run(cfg, d1);
    const RunManifest m2 = run(cfg, d2);
    CHECK(m1.config_digest == m2.config_digest);
    CHECK(m1.checksums == m2.checksums); // bit-identical outputs
    CHECK(m1.warnings == m2.warnings);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("emit_plot_data: missing inputs are usage errors") {
    const fs::path dir = fresh_dir("empty");
    fs::create_directories(dir);
    CHECK_THROWS_AS(emit_plot_data(dir, PlotKind::spacetime_heat), invalid_parameter);
    const RunManifest man = run(small_config(), dir);
    (void)man;
    CHECK_THROWS_AS(emit_plot_data(dir, PlotKind::trace), invalid_parameter); // no trace CSVs
    fs::remove_all(dir);
}

TEST_CASE("sweep_csv: pinned column order") {
    std::vector<SweepRow> rows(1);
    SweepRow& row = rows[0];
    row.cell.c = 1.0;
    row.cell.theta = 0.3;
    row.cell.k = 1.0;
    row.r = 0.7;
    row.cm = 1.6733200530681511;
    row.cb = 0.2828427124746190;
    row.predicted = predict(1.0, row.cm, row.cb);
    row.measured.kind = OutcomeKind::blocking_right;
    row.measured.left_speed = SpeedFit{-2.67, 0.0, 1e-3, 150.0, 300.0, 301};
    row.agreement = "agree";

    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("c,theta,k,r,c_m,c_b,predicted_kind,predicted_left,predicted_right,"
                    "measured_kind,measured_left,measured_right,agreement\n",
                    0) == 0);
    std::istringstream ss(csv);
    std::string header, data;
    std::getline(ss, header);
    std::getline(ss, data);
    // 13 columns in the data row too
    CHECK(std::count(data.begin(), data.end(), ',') == 12);
    CHECK(data.find("blocking_right") != std::string::npos);
    CHECK(data.find("agree") != std::string::npos);
    // empty right-speed slots stay empty, they are not zero-filled
    CHECK(data.find(",,") != std::string::npos);

    CHECK(sweep_csv({}) ==
          "c,theta,k,r,c_m,c_b,predicted_kind,predicted_left,predicted_right,"
          "measured_kind,measured_left,measured_right,agreement\n");
}
