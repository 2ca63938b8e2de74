#ifndef FRONTLAB_PHASE_HPP
#define FRONTLAB_PHASE_HPP

#include <atomic>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/common.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/solver.hpp"
#include "frontlab/stationary.hpp"
#include "frontlab/waves.hpp"

namespace frontlab {

enum class OutcomeKind { extinction, blocking_right, propagation, undecided };

inline const char* to_string(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::extinction: return "extinction";
    case OutcomeKind::blocking_right: return "blocking_right";
    case OutcomeKind::propagation: return "propagation";
    case OutcomeKind::undecided: return "undecided";
    }
    return "?";
}

struct Outcome {
    OutcomeKind kind = OutcomeKind::undecided;
    std::optional<SpeedFit> left_speed;
    std::optional<SpeedFit> right_speed;
    double max_u_final = 0.0;
    double right_trace_variation = 0.0;
    std::string note;
};

struct Prediction {
    OutcomeKind kind = OutcomeKind::propagation;
    std::optional<double> left_speed;   // positive = moving left
    std::optional<double> right_speed;  // positive = moving right
    bool left_uses_cm = false;
    bool right_uses_cm = false;
    bool conditional = false;  // depends on the initial data (star/club cells)
    bool open_case = false;    // c_b = 0 with c <= -c_m
    std::string cell;
};

// Phase diagram: spreading speeds as closed forms of (c, c_m, c_b).
// `large_data` selects the star branch of the conditional cells.
inline Prediction predict(double c, double cm, double cb, bool large_data = true) {
    if (!(cm > 0.0) || !(cm > cb))
        throw invalid_parameter("predict: inconsistent speeds (need c_m > max(0, c_b))");
    Prediction p;
    if (c > -cm) {
        p.left_speed = cm + c;
        p.left_uses_cm = true;
        const double right = std::min(std::max(cb - c, 0.0), cm - c);
        if (c > cb && c < cm) {
            p.kind = OutcomeKind::blocking_right;
            p.cell = "blocking";
        } else {
            p.kind = OutcomeKind::propagation;
            p.right_speed = right;
            p.right_uses_cm = (c >= cm);
            p.cell = (c >= cm) ? "kpp-dominated" : "bistable-right";
        }
        return p;
    }
    // c <= -c_m
    if (cb > 0.0) {
        p.conditional = true;
        if (large_data) {
            p.kind = OutcomeKind::propagation;
            p.left_speed = cb + c;   // negative: the left edge retreats rightward
            p.right_speed = cb - c;
            p.cell = "conditional-star";
        } else {
            p.kind = OutcomeKind::extinction;
            p.cell = "conditional-club";
        }
    } else if (cb == 0.0) {
        p.open_case = true;
        p.kind = OutcomeKind::undecided;
        p.cell = "open";
    } else {
        p.kind = OutcomeKind::extinction;
        p.cell = "extinction";
    }
    return p;
}

struct ClassifyThresholds {
    double eps_ext = 1e-3;
    double blocking_variation = 1.0;
    double level = 0.5;
    double undecided_ceiling = 0.1;
};

struct SpeedFitHints {
    bool left_log_correction = false;   // predicted left speed involves c_m
    bool right_log_correction = false;
    double cm = 0.0;
};

namespace detail {

// Linear speed of a trace; when the predicted speed involves c_m the Bramson
// drift is removed by freezing the ln t coefficient at +-3/c_m.
inline std::optional<SpeedFit> fit_side(const FrontTrace& tr, double t1, double t2,
                                        bool log_correction, double cm, Side side) {
    if (tr.count_in(t1, t2) < 50) return std::nullopt;
    try {
        if (!log_correction || cm <= 0.0) return fit_speed(tr, t1, t2);
        // E^-(t) ~ -(c_m+c) t + (3/c_m) ln t ; E^+(t) ~ (c_m-c) t - (3/c_m) ln t
        const double b = (side == Side::left ? 1.0 : -1.0) * 3.0 / cm;
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < tr.t.size(); ++i)
            if (tr.t[i] >= t1 && tr.t[i] <= t2 && tr.t[i] > 0.0 && tr.position[i]) {
                xs.push_back(tr.t[i]);
                ys.push_back(*tr.position[i] - b * std::log(tr.t[i]));
            }
        const LinearFit f = ols_line(xs, ys);
        return SpeedFit{f.slope, f.intercept, f.stderr_slope, t1, t2, f.n};
    } catch (const numerical_error&) {
        return std::nullopt;
    }
}

} // namespace detail

inline Outcome classify(const Trajectory& traj,
                        const ClassifyThresholds& th = {},
                        const SpeedFitHints& hints = {}) {
    Outcome out;
    const Snapshot& fin = traj.last();
    for (double v : fin.u) out.max_u_final = std::max(out.max_u_final, v);

    const double T = fin.t;
    if (out.max_u_final < th.eps_ext) {
        out.kind = OutcomeKind::extinction;
        return out;
    }
    if (out.max_u_final < th.undecided_ceiling) {
        // still small: check whether the sup is decaying
        const std::size_t jP = traj.snapshot_index(0.75 * T);
        double prev_max = 0.0;
        for (double v : traj.snapshots[jP].u) prev_max = std::max(prev_max, v);
        if (out.max_u_final < prev_max) {
            out.kind = OutcomeKind::undecided;
            out.note = "sup still decaying; extend T";
            return out;
        }
    }

    const FrontTrace left = trace_level(traj, th.level, Side::left);
    const FrontTrace right = trace_level(traj, th.level, Side::right);
    const double t1 = 0.5 * T, t2 = T;

    // total variation of the right trace over the last half
    double var = 0.0;
    {
        std::optional<double> prev;
        for (std::size_t i = 0; i < right.t.size(); ++i) {
            if (right.t[i] < t1 || !right.position[i]) continue;
            if (prev) var += std::fabs(*right.position[i] - *prev);
            prev = right.position[i];
        }
    }
    out.right_trace_variation = var;

    out.left_speed = detail::fit_side(left, t1, t2, hints.left_log_correction, hints.cm, Side::left);
    out.right_speed = detail::fit_side(right, t1, t2, hints.right_log_correction, hints.cm, Side::right);

    const bool right_present = right.count_in(t1, t2) >= 50;
    if (right_present && var < th.blocking_variation && semi_persistence_check(traj, 0.0)) {
        out.kind = OutcomeKind::blocking_right;
        return out;
    }
    if (out.left_speed || out.right_speed) {
        out.kind = OutcomeKind::propagation;
        return out;
    }
    out.kind = OutcomeKind::undecided;
    out.note = "no fit converged";
    return out;
}

// ---------------------------------------------------------------------------
// Sweep of (c, theta, k) cells: run, classify, compare against predict().
// ---------------------------------------------------------------------------
struct SweepCell {
    double c = 0.0;
    double theta = 0.3;
    double k = 1.0;
    double L = 5.0;
    InitialDatum u0{0.9, 10.0, 0.0, 2.0};
    bool large_data = true;
    std::string label;
};

struct SweepRow {
    SweepCell cell;
    double r = 0.0, cm = 0.0, cb = 0.0;
    Prediction predicted;
    Outcome measured;
    std::string agreement; // "agree" | "disagree" | "undecided" | "error: ..."
};

inline bool speed_match(double predicted, double measured, double rel = 0.05,
                        double abs_tol = 0.02) {
    const double tol = std::max(rel * std::fabs(predicted), abs_tol);
    return std::fabs(predicted - measured) <= tol;
}

/// One sweep cell end to end. The reference family ties r = k (1 - theta).
inline SweepRow run_sweep_cell(const SweepCell& cell, double T = 300.0,
                               double dx = 0.1, double dt = 0.02) {
    SweepRow row;
    row.cell = cell;
    row.r = cell.k * (1.0 - cell.theta);
    const Reaction fm = build_kpp(row.r);
    const Reaction fb = build_cubic_bistable(cell.k, cell.theta);
    row.cm = kpp_min_speed(fm);
    const WaveProfile phi = bistable_front(fb);
    row.cb = phi.speed;
    row.predicted = predict(cell.c, row.cm, row.cb, cell.large_data);

    Problem prob;
    prob.field = build_blend(fm, fb, cell.L);
    prob.c = cell.c;
    prob.dx = dx;
    prob.dt = dt;
    const double pad = 30.0;
    prob.x_lo = std::min(-cell.L - 20.0, cell.u0.support_lo() - pad);
    prob.x_hi = std::max(cell.L + 20.0, cell.u0.support_hi() + pad);
    prob.grow = GrowPolicy::expand_when_front_near_edge;
    // the growing grid keeps fronts away from the edges, where u ~ 0: far-field
    // Dirichlet avoids the no-flux boundary regrowing swept-away remnants
    prob.bc = BoundaryCondition::dirichlet_farfield;

    Trajectory traj = integrate(prob, cell.u0, T, 0.5);

    SpeedFitHints hints;
    hints.cm = row.cm;
    hints.left_log_correction = row.predicted.left_uses_cm;
    hints.right_log_correction = row.predicted.right_uses_cm;
    row.measured = classify(traj, {}, hints);

    // agreement: kinds match and each predicted finite speed within tolerance.
    // The c = c_b cell reports right speed 0 but classify may see a blocked-
    // looking trace; propagation with right speed ~0 counts as agreement.
    if (row.measured.kind == OutcomeKind::undecided) {
        row.agreement = "undecided";
        return row;
    }
    bool agree = row.measured.kind == row.predicted.kind;
    if (!agree && row.predicted.kind == OutcomeKind::propagation &&
        row.measured.kind == OutcomeKind::blocking_right &&
        row.predicted.right_speed && std::fabs(*row.predicted.right_speed) <= 1e-9) {
        agree = true; // virtual blocking at c = c_b
    }
    if (agree && row.predicted.left_speed) {
        // left trace position slope is -(left speed)
        agree = row.measured.left_speed &&
                speed_match(*row.predicted.left_speed, -row.measured.left_speed->speed);
    }
    if (agree && row.predicted.right_speed &&
        row.measured.kind == OutcomeKind::propagation) {
        agree = row.measured.right_speed &&
                speed_match(*row.predicted.right_speed, row.measured.right_speed->speed);
    }
    row.agreement = agree ? "agree" : "disagree";
    return row;
}

// The reference 12-cell grid. Conditional cells at c = -2 carry their own
// initial data: the large-data cell a wide plateau deep in the bistable
// region, the small-data cell one kept below the ignition threshold there.
inline std::vector<SweepCell> reference_sweep_cells() {
    std::vector<SweepCell> cells;
    auto add = [&](double c, double theta, const char* label) {
        SweepCell cell;
        cell.c = c;
        cell.theta = theta;
        cell.label = label;
        cells.push_back(cell);
    };
    add(3.0, 0.3, "t03_c3");
    add(2.0, 0.3, "t03_c2");
    add(1.0, 0.3, "t03_c1");
    add(0.2828427124746190, 0.3, "t03_ccb");
    add(0.0, 0.3, "t03_c0");
    add(-1.0, 0.3, "t03_cm1");
    add(-2.0, 0.3, "t03_cm2_large");
    cells.back().u0 = InitialDatum{0.9, 50.0, 100.0, 2.0};
    add(-2.0, 0.3, "t03_cm2_small");
    cells.back().u0 = InitialDatum{0.25, 10.0, 100.0, 2.0};
    cells.back().large_data = false;
    add(0.0, 0.6, "t06_c0");
    add(-1.5, 0.6, "t06_cm15");
    add(0.0, 0.95, "t095_c0");
    add(-0.7, 0.95, "t095_cm07");
    return cells;
}

inline std::vector<SweepRow> sweep(const std::vector<SweepCell>& cells, double T = 300.0,
                                   int jobs = 4, double dx = 0.1, double dt = 0.02) {
    std::vector<SweepRow> rows(cells.size());
    std::vector<std::future<void>> pending;
    std::size_t next = 0;
    const int workers = std::max(1, jobs);
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> cursor{0};
    for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= cells.size()) return;
                try {
                    rows[i] = run_sweep_cell(cells[i], T, dx, dt);
                } catch (const std::exception& e) {
                    rows[i].cell = cells[i];
                    rows[i].agreement = std::string("error: ") + e.what();
                }
            }
        }));
    }
    for (auto& f : futs) f.get();
    (void)next;
    return rows;
}

// ---------------------------------------------------------------------------
// Threshold bump width between extinction and propagation in the conditional
// regime (c <= -c_m, c_b > 0).
// ---------------------------------------------------------------------------
struct ThresholdResult {
    double width = 0.0;
    double extinct_width = 0.0;
    double propagating_width = 0.0;
    OutcomeKind below = OutcomeKind::extinction;
    OutcomeKind above = OutcomeKind::propagation;
};

inline ThresholdResult threshold_width(double c, double k, double theta, double L,
                                       double height, double tol_w,
                                       double T = 150.0, double w_max = 200.0) {
    const double r = k * (1.0 - theta);
    const Reaction fm = build_kpp(r);
    const Reaction fb = build_cubic_bistable(k, theta);
    const double cm = kpp_min_speed(fm);
    const WaveProfile phi = bistable_front(fb);
    if (!(c <= -cm)) throw wrong_regime("threshold_width: need c <= -c_m");
    if (!(phi.speed > 0.0)) throw wrong_regime("threshold_width: need c_b > 0");
    // heights at or below theta never propagate; the bracket search below
    // reports no-threshold-found for them

    auto outcome_for = [&](double w) {
        Problem prob;
        prob.field = build_blend(fm, fb, L);
        prob.c = c;
        prob.dx = 0.1;
        prob.dt = 0.02;
        InitialDatum u0{height, w, 100.0 + 0.5 * w, 2.0};
        prob.x_lo = -60.0;
        prob.x_hi = u0.support_hi() + 60.0;
        prob.bc = BoundaryCondition::dirichlet_farfield;
        prob.grow = GrowPolicy::expand_when_front_near_edge;
        Trajectory traj = integrate(prob, u0, T, 1.0);
        double mx = 0.0;
        for (double v : traj.last().u) mx = std::max(mx, v);
        if (mx < 1e-2) return OutcomeKind::extinction;
        if (mx > 0.5) return OutcomeKind::propagation;
        return OutcomeKind::undecided;
    };

    double lo = tol_w; // effectively point data: too little mass to ignite
    if (outcome_for(lo) == OutcomeKind::propagation)
        throw numerical_error("threshold_width: even the smallest bump propagates");
    double hi = 10.0;
    while (hi <= w_max && outcome_for(hi) != OutcomeKind::propagation) hi *= 2.0;
    if (hi > w_max)
        throw numerical_error("threshold_width: no-threshold-found up to w_max");

    while (hi - lo > tol_w) {
        const double mid = 0.5 * (lo + hi);
        if (outcome_for(mid) == OutcomeKind::propagation) hi = mid; else lo = mid;
    }
    ThresholdResult res;
    res.width = 0.5 * (lo + hi);
    res.extinct_width = lo;
    res.propagating_width = hi;
    res.below = outcome_for(lo);
    res.above = outcome_for(hi);
    return res;
}

} // namespace frontlab

#endif
