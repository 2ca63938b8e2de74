// Command line front-end for the front propagation laboratory.
//
// Exit codes: 0 success, 2 bad configuration or arguments, 3 numerical
// failure, 4 a verification check failed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frontlab/frontlab.hpp"

namespace fs = std::filesystem;
using namespace frontlab;

namespace {

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw invalid_parameter("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& p, const std::string& s) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw numerical_error("cannot write " + p.string());
    out << s;
}

struct GlobalOpts {
    std::string out_dir = "out";
    int jobs = 4;
    bool quiet = false;
};

int cmd_wave(const GlobalOpts& g, const std::string& family, double k, double theta,
             double r, double nu, const std::string& out_file) {
    WaveProfile w;
    if (family == "bistable") {
        w = bistable_front(build_cubic_bistable(k, theta));
    } else if (family == "kpp") {
        Reaction fm = build_kpp(r);
        if (nu <= 0.0) nu = kpp_min_speed(fm);
        w = kpp_front(fm, nu);
    } else {
        throw invalid_parameter("wave: family must be 'bistable' or 'kpp'");
    }
    std::ostringstream out;
    out << "# speed = " << format_double(w.speed)
        << ", decay_plus = " << format_double(w.decay_plus)
        << ", decay_minus = " << format_double(w.decay_minus) << "\n";
    out << "s,phi,residual\n";
    for (std::size_t i = 0; i < w.phi.size(); ++i) {
        const double s = w.s0 + double(i) * w.ds;
        double res = 0.0;
        if (i > 0 && i + 1 < w.phi.size()) {
            const double d2 = (w.phi[i + 1] - 2.0 * w.phi[i] + w.phi[i - 1]) / (w.ds * w.ds);
            res = d2 + w.speed * w.dphi[i] + w.reaction.eval(w.phi[i]);
        }
        out << format_double(s) << ',' << format_double(w.phi[i]) << ','
            << format_double(res) << '\n';
    }
    const fs::path target = out_file.empty() ? fs::path(g.out_dir) / "wave.csv" : fs::path(out_file);
    write_text(target, out.str());
    if (!g.quiet)
        std::cout << "wave: speed " << w.speed << " decay+ " << w.decay_plus
                  << " decay- " << w.decay_minus << " -> " << target.string() << "\n";
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& config_path) {
    ExperimentConfig cfg = parse_config(read_text(config_path));
    RunManifest man = run(cfg, g.out_dir);
    if (!g.quiet) {
        std::cout << "run complete in " << man.wall_seconds << " s, "
                  << man.checksums.size() << " files in " << g.out_dir << "\n";
        for (const auto& w : man.warnings) std::cout << "warning: " << w << "\n";
    }
    return 0;
}

int cmd_fronts(const GlobalOpts& g, const std::string& config_path, double level,
               const std::string& side_name, double t1, double t2, bool logdelay) {
    ExperimentConfig cfg = parse_config(read_text(config_path));
    AnalysisBlock an;
    an.levels = {level};
    an.side = side_name;
    an.fit_t1 = t1;
    an.fit_t2 = t2;
    an.fit_logdelay = logdelay;
    cfg.analysis = an;
    run(cfg, g.out_dir);
    if (!g.quiet) std::cout << read_text(fs::path(g.out_dir) / "fits.csv");
    return 0;
}

int cmd_stationary(const GlobalOpts& g, double k, double theta, double L, double c,
                   double X) {
    Problem prob;
    const double r = k * (1.0 - theta);
    prob.field = build_blend(build_kpp(r), build_cubic_bistable(k, theta), L);
    prob.c = c;
    StationaryProfile U = solve_blocking_profile(prob, X);
    std::ostringstream out;
    out << "# c = " << format_double(c) << ", eta = " << format_double(U.eta)
        << ", zeta = " << format_double(U.zeta)
        << ", residual_max = " << format_double(U.residual_max) << "\n";
    out << "x,U\n";
    for (std::size_t i = 0; i < U.u.size(); ++i)
        out << format_double(U.x0 + double(i) * U.dx) << ',' << format_double(U.u[i]) << '\n';
    const fs::path target = fs::path(g.out_dir) / "stationary.csv";
    write_text(target, out.str());
    if (!g.quiet)
        std::cout << "stationary profile: eta " << U.eta << " zeta " << U.zeta
                  << " residual " << U.residual_max << " -> " << target.string() << "\n";
    return 0;
}

int cmd_verify_barriers(const GlobalOpts& g, double k, double theta, double c) {
    WaveProfile phi = bistable_front(build_cubic_bistable(k, theta));
    bool all_pass = true;
    auto report = [&](const char* name, const ResidualReport& rep) {
        if (!g.quiet)
            std::cout << name << ": " << (rep.pass ? "pass" : "FAIL")
                      << " worst margin " << rep.worst_margin << " at t=" << rep.worst_t
                      << " x=" << rep.worst_x << " (" << rep.points << " points)\n";
        all_pass = all_pass && rep.pass;
    };
    if (c < phi.speed) {
        FifeMcLeodParams pr = fm_params(phi, c, BarrierDirection::rightward);
        report("rightward super",
               check_barrier_residual(pr, phi, 0.0, 50.0, 0.25, -100.0, 300.0, 0.25,
                                      BarrierKind::super));
        report("rightward sub",
               check_barrier_residual(pr, phi, 0.0, 50.0, 0.25, -100.0, 300.0, 0.25,
                                      BarrierKind::sub));
    } else if (!g.quiet) {
        std::cout << "rightward barriers skipped: need c < c_b = " << phi.speed << "\n";
    }
    if (c < -phi.speed) {
        FifeMcLeodParams pl = fm_params(phi, c, BarrierDirection::leftward);
        report("leftward super",
               check_barrier_residual(pl, phi, 0.0, 50.0, 0.25, -300.0, 100.0, 0.25,
                                      BarrierKind::super));
    } else if (!g.quiet) {
        std::cout << "leftward barrier skipped: need c < -c_b = " << -phi.speed << "\n";
    }
    return all_pass ? 0 : 4;
}

int cmd_classify(const GlobalOpts& g, const std::string& config_path) {
    ExperimentConfig cfg = parse_config(read_text(config_path));
    Problem prob = cfg.make_problem();
    Trajectory traj = integrate(prob, cfg.make_initial(), cfg.T, cfg.snapshot_every);
    const double cm = kpp_min_speed(prob.field.left);
    const double cb = bistable_front(prob.field.right).speed;
    Prediction pred = predict(cfg.c, cm, cb);
    SpeedFitHints hints;
    hints.cm = cm;
    hints.left_log_correction = pred.left_uses_cm;
    hints.right_log_correction = pred.right_uses_cm;
    Outcome out = classify(traj, {}, hints);
    std::cout << "predicted: " << to_string(pred.kind);
    if (pred.left_speed) std::cout << " left " << *pred.left_speed;
    if (pred.right_speed) std::cout << " right " << *pred.right_speed;
    std::cout << "\nmeasured:  " << to_string(out.kind);
    if (out.left_speed) std::cout << " left " << -out.left_speed->speed;
    if (out.right_speed) std::cout << " right " << out.right_speed->speed;
    std::cout << "\n";
    return 0;
}

int cmd_sweep(const GlobalOpts& g, double T) {
    std::vector<SweepRow> rows = sweep(reference_sweep_cells(), T, g.jobs);
    const std::string csv = sweep_csv(rows);
    write_text(fs::path(g.out_dir) / "sweep.csv", csv);
    bool all_agree = true;
    for (const auto& row : rows) {
        if (!g.quiet)
            std::cout << row.cell.label << ": " << to_string(row.predicted.kind) << " vs "
                      << to_string(row.measured.kind) << " -> " << row.agreement << "\n";
        if (row.agreement != "agree") all_agree = false;
    }
    return all_agree ? 0 : 4;
}

int cmd_plot_data(const GlobalOpts& g, const std::string& run_dir, const std::string& kind_name,
                  const std::string& out_file) {
    PlotKind kind;
    if (kind_name == "spacetime_heat") kind = PlotKind::spacetime_heat;
    else if (kind_name == "trace") kind = PlotKind::trace;
    else if (kind_name == "profile_overlay") kind = PlotKind::profile_overlay;
    else throw invalid_parameter("plot-data: kind must be spacetime_heat, trace or profile_overlay");
    std::string data;
    if (kind == PlotKind::profile_overlay) {
        // overlay the matching traveling front for the run's parameters
        nlohmann::json meta = nlohmann::json::parse(read_text(fs::path(run_dir) / "meta.json"));
        WaveProfile w = bistable_front(
            build_cubic_bistable(meta["problem"]["k"], meta["problem"]["theta"]));
        const double c = meta["problem"]["c"];
        data = emit_plot_data(run_dir, kind, &w, w.speed - c, 0.0);
    } else {
        data = emit_plot_data(run_dir, kind);
    }
    const fs::path target = out_file.empty() ? fs::path(g.out_dir) / (kind_name + ".dat")
                                             : fs::path(out_file);
    write_text(target, data);
    if (!g.quiet) std::cout << "plot data -> " << target.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"front_lab: spreading fronts in heterogeneous reaction-diffusion-advection"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--jobs", g.jobs, "worker threads for sweeps");
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    // wave
    auto* wave = app.add_subcommand("wave", "compute a traveling front profile");
    std::string family = "bistable", wave_out;
    double wk = 1.0, wtheta = 0.3, wr = 0.7, wnu = 0.0;
    wave->add_option("--family", family, "bistable | kpp");
    wave->add_option("--k", wk, "bistable amplitude");
    wave->add_option("--theta", wtheta, "bistable threshold");
    wave->add_option("--r", wr, "kpp growth rate");
    wave->add_option("--nu", wnu, "kpp front speed (0 = minimal)");
    wave->add_option("--output", wave_out, "output CSV path");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate a configured problem");
    std::string sim_cfg;
    simulate->add_option("--config", sim_cfg, "experiment config file")->required();

    // fronts
    auto* fronts = app.add_subcommand("fronts", "trace level sets and fit speeds");
    std::string fr_cfg, fr_side = "both";
    double fr_level = 0.5, fr_t1 = 0.0, fr_t2 = 0.0;
    bool fr_logdelay = false;
    fronts->add_option("--config", fr_cfg, "experiment config file")->required();
    fronts->add_option("--level", fr_level, "level to trace");
    fronts->add_option("--side", fr_side, "left | right | both");
    fronts->add_option("--t1", fr_t1, "fit window start");
    fronts->add_option("--t2", fr_t2, "fit window end");
    fronts->add_flag("--logdelay", fr_logdelay, "also fit the logarithmic delay model");

    // stationary
    auto* stationary = app.add_subcommand("stationary", "solve the blocking steady state");
    double st_k = 1.0, st_theta = 0.6, st_L = 5.0, st_c = 1.0, st_X = 160.0;
    stationary->add_option("--k", st_k);
    stationary->add_option("--theta", st_theta);
    stationary->add_option("--L", st_L);
    stationary->add_option("--c", st_c)->required();
    stationary->add_option("--X", st_X, "half-width of the solve domain");

    // verify-barriers
    auto* verify = app.add_subcommand("verify-barriers", "check comparison barrier residuals");
    double vb_k = 1.0, vb_theta = 0.3, vb_c = 0.0;
    verify->add_option("--k", vb_k);
    verify->add_option("--theta", vb_theta);
    verify->add_option("--c", vb_c, "advection rate");

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "predict and measure the outcome");
    std::string cl_cfg;
    classify_cmd->add_option("--config", cl_cfg, "experiment config file")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run the reference parameter sweep");
    double sw_T = 300.0;
    sweep_cmd->add_option("--T", sw_T, "integration horizon per cell");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "extract gnuplot-ready data from a run");
    std::string pd_dir, pd_kind = "spacetime_heat", pd_out;
    plot->add_option("--run-dir", pd_dir, "finished run directory")->required();
    plot->add_option("--kind", pd_kind, "spacetime_heat | trace | profile_overlay");
    plot->add_option("--output", pd_out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*wave) return cmd_wave(g, family, wk, wtheta, wr, wnu, wave_out);
        if (*simulate) return cmd_simulate(g, sim_cfg);
        if (*fronts) return cmd_fronts(g, fr_cfg, fr_level, fr_side, fr_t1, fr_t2, fr_logdelay);
        if (*stationary) return cmd_stationary(g, st_k, st_theta, st_L, st_c, st_X);
        if (*verify) return cmd_verify_barriers(g, vb_k, vb_theta, vb_c);
        if (*classify_cmd) return cmd_classify(g, cl_cfg);
        if (*sweep_cmd) return cmd_sweep(g, sw_T);
        if (*plot) return cmd_plot_data(g, pd_dir, pd_kind, pd_out);
    } catch (const invalid_parameter& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
