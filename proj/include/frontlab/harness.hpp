#ifndef FRONTLAB_HARNESS_HPP
#define FRONTLAB_HARNESS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/common.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/phase.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/solver.hpp"

namespace frontlab {

// ---------------------------------------------------------------------------
// Experiment configuration: key/value text with [section] tables. Unknown
// keys are rejected; round-trips losslessly through serialize/parse.
// ---------------------------------------------------------------------------
struct AnalysisBlock {
    std::vector<double> levels;        // level-set levels to trace
    std::string side = "left";         // left | right | both
    double fit_t1 = 0.0, fit_t2 = 0.0; // speed/logdelay window (0,0 = last half)
    bool fit_logdelay = false;
};

struct ExperimentConfig {
    // [reaction]
    double r = 0.7;
    double k = 1.0;
    double theta = 0.3;
    double L = 5.0;
    // [problem]
    double c = 0.0;
    double x_lo = -100.0, x_hi = 100.0;
    double dx = 0.1, dt = 0.02;
    std::string bc = "neumann";
    std::string grow = "expand";
    double grow_margin = 20.0;
    double grow_activity = 1e-6;
    // [initial]
    double height = 0.9, width = 10.0, center = 0.0, sigma = 2.0;
    // [run]
    double T = 300.0;
    double snapshot_every = 0.5;
    // [analysis] (optional)
    std::optional<AnalysisBlock> analysis;

    Problem make_problem() const {
        Problem p;
        p.field = build_blend(build_kpp(r), build_cubic_bistable(k, theta), L);
        p.c = c;
        p.x_lo = x_lo;
        p.x_hi = x_hi;
        p.dx = dx;
        p.dt = dt;
        if (bc == "neumann") p.bc = BoundaryCondition::neumann;
        else if (bc == "dirichlet") p.bc = BoundaryCondition::dirichlet_farfield;
        else throw invalid_parameter("config: unknown bc '" + bc + "'");
        if (grow == "expand") p.grow = GrowPolicy::expand_when_front_near_edge;
        else if (grow == "fixed") p.grow = GrowPolicy::fixed;
        else throw invalid_parameter("config: unknown grow policy '" + grow + "'");
        p.grow_margin = grow_margin;
        p.grow_activity = grow_activity;
        return p;
    }

    InitialDatum make_initial() const { return InitialDatum{height, width, center, sigma}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_num(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw invalid_parameter("config: bad numeric value for key '" + key + "': " + v);
    }
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    bool has_analysis = false;
    AnalysisBlock an;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw invalid_parameter("config: malformed section " + line);
            section = line.substr(1, line.size() - 2);
            if (section != "reaction" && section != "problem" && section != "initial" &&
                section != "run" && section != "analysis")
                throw invalid_parameter("config: unknown section '" + section + "'");
            if (section == "analysis") has_analysis = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw invalid_parameter("config: expected key = value: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        auto num = [&] { return detail::parse_num(key, val); };
        if (section == "reaction") {
            if (key == "r") cfg.r = num();
            else if (key == "k") cfg.k = num();
            else if (key == "theta") cfg.theta = num();
            else if (key == "L") cfg.L = num();
            else throw invalid_parameter("config: unknown key '" + key + "' in [reaction]");
        } else if (section == "problem") {
            if (key == "c") cfg.c = num();
            else if (key == "x_lo") cfg.x_lo = num();
            else if (key == "x_hi") cfg.x_hi = num();
            else if (key == "dx") cfg.dx = num();
            else if (key == "dt") cfg.dt = num();
            else if (key == "bc") cfg.bc = val;
            else if (key == "grow") cfg.grow = val;
            else if (key == "grow_margin") cfg.grow_margin = num();
            else if (key == "grow_activity") cfg.grow_activity = num();
            else throw invalid_parameter("config: unknown key '" + key + "' in [problem]");
        } else if (section == "initial") {
            if (key == "height") cfg.height = num();
            else if (key == "width") cfg.width = num();
            else if (key == "center") cfg.center = num();
            else if (key == "sigma") cfg.sigma = num();
            else throw invalid_parameter("config: unknown key '" + key + "' in [initial]");
        } else if (section == "run") {
            if (key == "T") cfg.T = num();
            else if (key == "snapshot_every") cfg.snapshot_every = num();
            else throw invalid_parameter("config: unknown key '" + key + "' in [run]");
        } else if (section == "analysis") {
            if (key == "levels") {
                an.levels.clear();
                std::istringstream ls(val);
                std::string tok;
                while (std::getline(ls, tok, ','))
                    an.levels.push_back(detail::parse_num(key, detail::trim(tok)));
            } else if (key == "side") an.side = val;
            else if (key == "fit_t1") an.fit_t1 = num();
            else if (key == "fit_t2") an.fit_t2 = num();
            else if (key == "fit_logdelay") an.fit_logdelay = (val == "true" || val == "1");
            else throw invalid_parameter("config: unknown key '" + key + "' in [analysis]");
        } else {
            throw invalid_parameter("config: key '" + key + "' outside any section");
        }
    }
    if (has_analysis) cfg.analysis = an;
    return cfg;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto d = format_double;
    out << "[reaction]\n"
        << "r = " << d(c.r) << "\nk = " << d(c.k) << "\ntheta = " << d(c.theta)
        << "\nL = " << d(c.L) << "\n\n[problem]\n"
        << "c = " << d(c.c) << "\nx_lo = " << d(c.x_lo) << "\nx_hi = " << d(c.x_hi)
        << "\ndx = " << d(c.dx) << "\ndt = " << d(c.dt) << "\nbc = " << c.bc
        << "\ngrow = " << c.grow << "\ngrow_margin = " << d(c.grow_margin)
        << "\ngrow_activity = " << d(c.grow_activity)
        << "\n\n[initial]\n"
        << "height = " << d(c.height) << "\nwidth = " << d(c.width)
        << "\ncenter = " << d(c.center) << "\nsigma = " << d(c.sigma)
        << "\n\n[run]\nT = " << d(c.T) << "\nsnapshot_every = " << d(c.snapshot_every) << "\n";
    if (c.analysis) {
        out << "\n[analysis]\nlevels = ";
        for (std::size_t i = 0; i < c.analysis->levels.size(); ++i)
            out << (i ? "," : "") << d(c.analysis->levels[i]);
        out << "\nside = " << c.analysis->side
            << "\nfit_t1 = " << d(c.analysis->fit_t1)
            << "\nfit_t2 = " << d(c.analysis->fit_t2)
            << "\nfit_logdelay = " << (c.analysis->fit_logdelay ? "true" : "false") << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Run directory: snapshots.csv, meta.json, events.log, analysis CSVs, and a
// manifest (written last, so a missing manifest marks a partial run).
// ---------------------------------------------------------------------------
struct RunManifest {
    std::string config_digest;
    std::string version = "frontlab-1.0";
    std::map<std::string, std::string> checksums;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw numerical_error("cannot write " + p.string());
    out << content;
}

inline std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace detail

inline std::string snapshots_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "t,x,u\n";
    for (const auto& s : traj.snapshots) {
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            if (s.u[i] == 0.0 && i > 0 && i + 1 < s.u.size() &&
                s.u[i - 1] == 0.0 && s.u[i + 1] == 0.0)
                continue; // skip interior zeros to keep files lean
            out << format_double(s.t) << ',' << format_double(s.x0 + double(i) * traj.problem.dx)
                << ',' << format_double(s.u[i]) << '\n';
        }
    }
    return out.str();
}

inline std::string trace_csv(const FrontTrace& tr) {
    std::ostringstream out;
    out << "t,position\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        out << format_double(tr.t[i]) << ',';
        if (tr.position[i]) out << format_double(*tr.position[i]);
        else out << "gap";
        out << '\n';
    }
    return out.str();
}

inline RunManifest run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);

    RunManifest man;
    const std::string cfg_text = serialize_config(cfg);
    man.config_digest = detail::hex64(fnv1a64(cfg_text));

    Problem prob = cfg.make_problem();
    InitialDatum u0 = cfg.make_initial();
    Trajectory traj = integrate(prob, u0, cfg.T, cfg.snapshot_every);

    auto emit = [&](const std::string& name, const std::string& content) {
        detail::write_file(out_dir / name, content);
        man.checksums[name] = detail::hex64(fnv1a64(content));
    };

    emit("config.txt", cfg_text);
    emit("snapshots.csv", snapshots_csv(traj));

    nlohmann::json meta;
    meta["version"] = man.version;
    meta["config_digest"] = man.config_digest;
    meta["problem"] = {{"c", prob.c}, {"x_lo", prob.x_lo}, {"x_hi", prob.x_hi},
                       {"dx", prob.dx}, {"dt", prob.dt},
                       {"bc", cfg.bc}, {"grow", cfg.grow}, {"grow_margin", prob.grow_margin},
                       {"grow_activity", prob.grow_activity},
                       {"L", cfg.L}, {"r", cfg.r}, {"k", cfg.k}, {"theta", cfg.theta}};
    meta["run"] = {{"T", cfg.T}, {"snapshot_every", cfg.snapshot_every},
                   {"snapshots", traj.snapshots.size()},
                   {"scheme", "imex: implicit diffusion+advection, explicit reaction"}};
    emit("meta.json", meta.dump(2) + "\n");

    {
        std::ostringstream ev;
        for (const auto& e : traj.events) ev << e << '\n';
        emit("events.log", ev.str());
    }
    if (traj.front_escape) man.warnings.push_back("front-escape");

    if (cfg.analysis) {
        const AnalysisBlock& an = cfg.analysis->levels.empty()
                                      ? AnalysisBlock{{0.5}, cfg.analysis->side,
                                                      cfg.analysis->fit_t1,
                                                      cfg.analysis->fit_t2,
                                                      cfg.analysis->fit_logdelay}
                                      : *cfg.analysis;
        double t1 = an.fit_t1, t2 = an.fit_t2;
        if (t2 <= t1) { t1 = 0.5 * cfg.T; t2 = cfg.T; }
        std::ostringstream fits;
        fits << "level,side,kind,a,b,c0,stderr\n";
        for (double level : an.levels) {
            for (Side side : {Side::left, Side::right}) {
                if (an.side == "left" && side == Side::right) continue;
                if (an.side == "right" && side == Side::left) continue;
                const char* sname = side == Side::left ? "left" : "right";
                FrontTrace tr = trace_level(traj, level, side);
                emit(std::string("trace_") + sname + "_" + format_double(level) + ".csv",
                     trace_csv(tr));
                try {
                    SpeedFit sf = fit_speed(tr, t1, t2);
                    fits << format_double(level) << ',' << sname << ",speed,"
                         << format_double(sf.speed) << ",0,"
                         << format_double(sf.intercept) << ','
                         << format_double(sf.stderr_speed) << '\n';
                    if (an.fit_logdelay) {
                        LogDelayFit lf = fit_log_delay(tr, t1, t2);
                        fits << format_double(level) << ',' << sname << ",logdelay,"
                             << format_double(lf.a) << ',' << format_double(lf.b) << ','
                             << format_double(lf.c0) << ',' << format_double(lf.rms) << '\n';
                    }
                } catch (const numerical_error& e) {
                    man.warnings.push_back(std::string("fit skipped (") + sname + "): " + e.what());
                }
            }
        }
        emit("fits.csv", fits.str());
    }

    man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    nlohmann::json mj;
    mj["config_digest"] = man.config_digest;
    mj["version"] = man.version;
    mj["wall_seconds"] = man.wall_seconds;
    mj["warnings"] = man.warnings;
    mj["files"] = man.checksums;
    detail::write_file(out_dir / "manifest.json", mj.dump(2) + "\n");
    return man;
}

// ---------------------------------------------------------------------------
// Gnuplot-ready plot data extracted from a finished run directory.
// ---------------------------------------------------------------------------
enum class PlotKind { spacetime_heat, trace, profile_overlay };

inline std::string emit_plot_data(const std::filesystem::path& run_dir, PlotKind kind,
                                  const WaveProfile* overlay = nullptr,
                                  double overlay_sigma = 0.0, double overlay_shift = 0.0) {
    namespace fs = std::filesystem;
    const fs::path snaps = run_dir / "snapshots.csv";
    std::ifstream in(snaps);
    if (!in) throw invalid_parameter("emit_plot_data: missing " + snaps.string());
    std::string header;
    std::getline(in, header);
    std::ostringstream out;
    if (kind == PlotKind::spacetime_heat) {
        out << "# t x u\n";
        std::string line;
        double prev_t = -1e300;
        while (std::getline(in, line)) {
            const auto c1 = line.find(','), c2 = line.rfind(',');
            const double t = std::stod(line.substr(0, c1));
            if (t != prev_t && prev_t != -1e300) out << '\n'; // gnuplot block break
            prev_t = t;
            out << line.substr(0, c1) << ' ' << line.substr(c1 + 1, c2 - c1 - 1) << ' '
                << line.substr(c2 + 1) << '\n';
        }
    } else if (kind == PlotKind::trace) {
        // prefer an existing trace CSV; otherwise trace level 0.5 from snapshots
        for (const auto& ent : fs::directory_iterator(run_dir)) {
            const std::string name = ent.path().filename().string();
            if (name.rfind("trace_", 0) == 0) {
                std::ifstream tin(ent.path());
                std::string l;
                std::getline(tin, l);
                out << "# t position\n";
                while (std::getline(tin, l)) {
                    const auto c = l.find(',');
                    if (l.substr(c + 1) == "gap") continue;
                    out << l.substr(0, c) << ' ' << l.substr(c + 1) << '\n';
                }
                return out.str();
            }
        }
        throw invalid_parameter("emit_plot_data: no trace CSV in run directory");
    } else {
        if (!overlay) throw invalid_parameter("emit_plot_data: profile_overlay needs a wave profile");
        out << "# x u phi_shifted\n";
        std::string line;
        double last_t = -1e300;
        std::vector<std::pair<double, double>> final_snap;
        while (std::getline(in, line)) {
            const auto c1 = line.find(','), c2 = line.rfind(',');
            const double t = std::stod(line.substr(0, c1));
            if (t != last_t) { final_snap.clear(); last_t = t; }
            final_snap.emplace_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                                    std::stod(line.substr(c2 + 1)));
        }
        for (const auto& [x, u] : final_snap)
            out << format_double(x) << ' ' << format_double(u) << ' '
                << format_double(overlay->eval(x - overlay_sigma * last_t + overlay_shift)) << '\n';
    }
    return out.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "c,theta,k,r,c_m,c_b,predicted_kind,predicted_left,predicted_right,"
           "measured_kind,measured_left,measured_right,agreement\n";
    for (const auto& row : rows) {
        out << format_double(row.cell.c) << ',' << format_double(row.cell.theta) << ','
            << format_double(row.cell.k) << ',' << format_double(row.r) << ','
            << format_double(row.cm) << ',' << format_double(row.cb) << ','
            << to_string(row.predicted.kind) << ',';
        if (row.predicted.left_speed) out << format_double(*row.predicted.left_speed);
        out << ',';
        if (row.predicted.right_speed) out << format_double(*row.predicted.right_speed);
        out << ',' << to_string(row.measured.kind) << ',';
        if (row.measured.left_speed) out << format_double(-row.measured.left_speed->speed);
        out << ',';
        if (row.measured.right_speed) out << format_double(row.measured.right_speed->speed);
        out << ',' << row.agreement << '\n';
    }
    return out.str();
}

} // namespace frontlab

#endif
