#ifndef FRONTLAB_SOLVER_HPP
#define FRONTLAB_SOLVER_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "frontlab/common.hpp"
#include "frontlab/reaction.hpp"

namespace frontlab {

enum class BoundaryCondition { neumann, dirichlet_farfield };
enum class GrowPolicy { fixed, expand_when_front_near_edge };

// ---------------------------------------------------------------------------
// Cauchy problem for u_t = u_xx + c u_x + f(x, u) on a truncated interval.
// ---------------------------------------------------------------------------
struct Problem {
    HeterogeneousField field;
    double c = 0.0;
    double x_lo = -100.0;
    double x_hi = 100.0;
    double dx = 0.1;
    double dt = 0.02;
    BoundaryCondition bc = BoundaryCondition::neumann;
    GrowPolicy grow = GrowPolicy::expand_when_front_near_edge;
    double grow_margin = 20.0;
    // Activity level that triggers expansion near an edge. Runs that measure
    // the logarithmic front delay need this deep in the machine range: a
    // boundary that truncates the pulled front's tail at a visible level acts
    // as a cutoff that saturates the ln t term.
    double grow_activity = 1e-6;

    void validate() const {
        if (!(dx > 0.0 && dt > 0.0)) throw invalid_parameter("Problem: dx and dt must be positive");
        if (!(x_lo < -field.L - 10.0 && x_hi > field.L + 10.0))
            throw invalid_parameter("Problem: domain must extend 10 units beyond the transition zone");
    }
};

// Plateau bump with quintic-smoothstep shoulders of width sigma.
struct InitialDatum {
    double height = 0.9;
    double width = 10.0;
    double center = 0.0;
    double sigma = 2.0;

    double eval(double x) const {
        const double d = std::fabs(x - center) - 0.5 * width;
        if (d <= 0.0) return height;
        if (d >= sigma) return 0.0;
        return height * smoothstep5(1.0 - d / sigma);
    }

    double support_lo() const { return center - 0.5 * width - sigma; }
    double support_hi() const { return center + 0.5 * width + sigma; }
};

struct Snapshot {
    double t = 0.0;
    double x0 = 0.0; // abscissa of the first node
    std::vector<double> u;
};

struct Trajectory {
    Problem problem;
    std::vector<Snapshot> snapshots;
    std::vector<std::string> events;
    bool front_escape = false;

    double dx() const { return problem.dx; }
    const Snapshot& last() const { return snapshots.back(); }

    /// Linear interpolation of snapshot j at abscissa x (0 outside the grid
    /// for compact data; the caller decides whether that is meaningful).
    double value_at(std::size_t j, double x) const {
        const Snapshot& s = snapshots[j];
        const double u_pos = (x - s.x0) / problem.dx;
        if (u_pos <= 0.0) return s.u.front();
        if (u_pos >= double(s.u.size() - 1)) return s.u.back();
        const std::size_t i = std::size_t(u_pos);
        const double t = u_pos - double(i);
        return (1.0 - t) * s.u[i] + t * s.u[i + 1];
    }

    /// Index of the snapshot closest to time t.
    std::size_t snapshot_index(double t) const {
        std::size_t best = 0;
        double err = 1e300;
        for (std::size_t j = 0; j < snapshots.size(); ++j) {
            const double e = std::fabs(snapshots[j].t - t);
            if (e < err) { err = e; best = j; }
        }
        return best;
    }
};

namespace detail {

// Linear operator L = D2 + c D1, used on both sides of the Crank-Nicolson
// step: implicit matrix I - (dt/2) L and explicit application I + (dt/2) L.
// Diffusion in flux form at Neumann boundaries so that pure diffusion
// conserves mass exactly (column sums of both matrices equal 1).
struct LinearStep {
    std::vector<double> lower, diag, upper;
    std::vector<double> scratch;
    double h = 0.0; // dt/2
    double rd = 0.0, ra = 0.0;
    BoundaryCondition bc = BoundaryCondition::neumann;

    void assemble(std::size_t n, double dx, double dt, double c, BoundaryCondition bc_) {
        bc = bc_;
        h = 0.5 * dt;
        rd = h / (dx * dx);
        ra = h * c / (2.0 * dx);
        lower.assign(n, 0.0);
        diag.assign(n, 0.0);
        upper.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            lower[i] = -rd + ra;
            diag[i] = 1.0 + 2.0 * rd;
            upper[i] = -rd - ra;
        }
        if (bc == BoundaryCondition::neumann) {
            diag[0] = 1.0 + rd;   upper[0] = -rd;
            diag[n - 1] = 1.0 + rd; lower[n - 1] = -rd;
        } else {
            diag[0] = 1.0; upper[0] = 0.0;
            diag[n - 1] = 1.0; lower[n - 1] = 0.0;
        }
    }

    // out = (I + (dt/2) L) u
    void apply_explicit(const std::vector<double>& u, std::vector<double>& out) const {
        const std::size_t n = u.size();
        for (std::size_t i = 1; i + 1 < n; ++i)
            out[i] = u[i] + rd * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + ra * (u[i + 1] - u[i - 1]);
        if (bc == BoundaryCondition::neumann) {
            out[0] = u[0] + rd * (u[1] - u[0]);
            out[n - 1] = u[n - 1] + rd * (u[n - 2] - u[n - 1]);
        } else {
            out[0] = 0.0;
            out[n - 1] = 0.0;
        }
    }

    void solve(std::vector<double>& rhs) {
        solve_tridiagonal(lower, diag, upper, rhs, scratch);
    }
};


} // namespace detail

// ---------------------------------------------------------------------------
// IMEX time stepping: Crank-Nicolson for diffusion + advection (tridiagonal
// solve per step), two-step Adams-Bashforth for the reaction. Second order
// in time and space; the first step uses an explicit Euler reaction term.
// ---------------------------------------------------------------------------
template <class Datum = InitialDatum>
inline Trajectory integrate(const Problem& problem, const Datum& u0,
                            double T, double snapshot_every) {
    problem.validate();
    if (u0.support_lo() < problem.x_lo || u0.support_hi() > problem.x_hi)
        throw invalid_parameter("integrate: initial datum support outside the domain");
    // explicit reaction needs dt * Lip(f) < 1 for the discrete comparison
    double lip = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double s = -0.1 + 2.3 * i / 200.0;
        lip = std::max(lip, std::fabs(problem.field.left.deriv(s)));
        lip = std::max(lip, std::fabs(problem.field.right.deriv(s)));
    }
    if (problem.dt * lip >= 1.0)
        throw invalid_parameter("integrate: dt too large for the reaction Lipschitz constant");

    Trajectory traj;
    traj.problem = problem;

    double x_lo = problem.x_lo, x_hi = problem.x_hi;
    std::size_t n = std::size_t(std::llround((x_hi - x_lo) / problem.dx)) + 1;
    std::vector<double> u(n), rhs(n), f_prev(n);
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) u[i] = u0.eval(x_lo + double(i) * problem.dx);

    detail::LinearStep op;
    op.assemble(n, problem.dx, problem.dt, problem.c, problem.bc);

    const long nsteps = long(std::ceil(T / problem.dt - 1e-9));
    const long snap_stride = std::max<long>(1, long(std::llround(snapshot_every / problem.dt)));
    const long max_snaps = 2000;
    const long decim = std::max<long>(1, (nsteps / snap_stride + 1) / max_snaps);

    // snapshots keep only the numerically visible support: the growing grid
    // can carry tails far below anything the analysis ever reads
    auto push_snapshot = [&](double t) {
        const double floor_level = 1e-16;
        std::size_t a = 0, b = n;
        while (a < n && u[a] <= floor_level) ++a;
        while (b > a && u[b - 1] <= floor_level) --b;
        const std::size_t pad = 10;
        a = a > pad ? a - pad : 0;
        b = std::min(n, b + pad);
        if (a >= b) { a = 0; b = std::min<std::size_t>(n, 1); }
        Snapshot s;
        s.t = t;
        s.x0 = x_lo + double(a) * problem.dx;
        s.u.assign(u.begin() + long(a), u.begin() + long(b));
        traj.snapshots.push_back(std::move(s));
    };
    push_snapshot(0.0);

    long snap_count = 0;
    for (long step = 0; step < nsteps; ++step) {
        const double t1 = double(step + 1) * problem.dt;
        op.apply_explicit(u, rhs);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = x_lo + double(i) * problem.dx;
            const double fi = problem.field.eval(x, u[i]);
            rhs[i] += have_prev ? problem.dt * (1.5 * fi - 0.5 * f_prev[i])
                                : problem.dt * fi;
            f_prev[i] = fi;
        }
        have_prev = true;
        if (problem.bc == BoundaryCondition::dirichlet_farfield) {
            rhs[0] = 0.0;
            rhs[n - 1] = 0.0;
        }
        op.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            double v = rhs[i];
            if (std::isnan(v) || std::isinf(v))
                throw numerical_error("integrate: numerical instability at t=" + std::to_string(t1));
            if (v < 0.0) {
                if (v < -1e-12)
                    throw numerical_error("integrate: negative undershoot beyond tolerance at t=" +
                                          std::to_string(t1));
                v = 0.0;
            }
            u[i] = v;
        }

        // domain growth when activity approaches a boundary
        if (problem.grow == GrowPolicy::expand_when_front_near_edge) {
            const std::size_t guard = std::size_t(problem.grow_margin / problem.dx);
            bool near_lo = false, near_hi = false;
            for (std::size_t i = 0; i < std::min(guard, n); ++i)
                if (u[i] > problem.grow_activity) { near_lo = true; break; }
            for (std::size_t i = n - std::min(guard, n); i < n; ++i)
                if (u[i] > problem.grow_activity) { near_hi = true; break; }
            if (near_lo || near_hi) {
                const std::size_t extra = std::max<std::size_t>(std::size_t(0.25 * double(n)), guard);
                std::vector<double> nu_vals, nf_vals;
                nu_vals.reserve(n + 2 * extra);
                nf_vals.reserve(n + 2 * extra);
                if (near_lo) {
                    nu_vals.assign(extra, 0.0);
                    nf_vals.assign(extra, 0.0); // f(x, 0) = 0 in the fresh region
                    x_lo -= double(extra) * problem.dx;
                }
                nu_vals.insert(nu_vals.end(), u.begin(), u.end());
                nf_vals.insert(nf_vals.end(), f_prev.begin(), f_prev.end());
                if (near_hi) {
                    nu_vals.insert(nu_vals.end(), extra, 0.0);
                    nf_vals.insert(nf_vals.end(), extra, 0.0);
                    x_hi += double(extra) * problem.dx;
                }
                u = std::move(nu_vals);
                f_prev = std::move(nf_vals);
                n = u.size();
                rhs.resize(n);
                op.assemble(n, problem.dx, problem.dt, problem.c, problem.bc);
                traj.events.push_back("grow t=" + std::to_string(t1) +
                                      " domain=[" + std::to_string(x_lo) + "," +
                                      std::to_string(x_hi) + "]");
            }
        } else {
            // fixed grid: record a warning once the front reaches the margin
            if (!traj.front_escape) {
                const std::size_t guard = std::size_t(problem.grow_margin / problem.dx);
                for (std::size_t i = 0; i < std::min(guard, n); ++i)
                    if (u[i] > 1e-6) { traj.front_escape = true; break; }
                for (std::size_t i = n - std::min(guard, n); i < n && !traj.front_escape; ++i)
                    if (u[i] > 1e-6) traj.front_escape = true; // visible level only
                if (traj.front_escape)
                    traj.events.push_back("front-escape t=" + std::to_string(t1));
            }
        }

        if ((step + 1) % snap_stride == 0) {
            ++snap_count;
            if (snap_count % decim == 0 || step + 1 == nsteps) push_snapshot(t1);
        }
    }
    if (traj.snapshots.back().t < T - 0.5 * problem.dt) push_snapshot(double(nsteps) * problem.dt);
    return traj;
}

/// Resamples all snapshots into the moving frame y = x + c t. Values are
/// re-interpolated onto a common uniform grid; edge values extend outward.
inline Trajectory frame_shift(const Trajectory& traj) {
    Trajectory out;
    out.problem = traj.problem;
    out.problem.c = -traj.problem.c; // applying again with the flipped rate inverts
    out.events = traj.events;
    const double c = traj.problem.c, dx = traj.problem.dx;
    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : traj.snapshots) {
        const double lo = s.x0 + c * s.t;
        const double hi = s.x0 + double(s.u.size() - 1) * dx + c * s.t;
        y_lo = std::min(y_lo, lo);
        y_hi = std::max(y_hi, hi);
    }
    const std::size_t n = std::size_t(std::llround((y_hi - y_lo) / dx)) + 1;
    for (const auto& s : traj.snapshots) {
        Snapshot ns;
        ns.t = s.t;
        ns.x0 = y_lo;
        ns.u.resize(n);
        const double shifted_x0 = s.x0 + c * s.t;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = y_lo + double(i) * dx;
            const double pos = (y - shifted_x0) / dx;
            if (pos <= 0.0) ns.u[i] = s.u.front();
            else if (pos >= double(s.u.size() - 1)) ns.u[i] = s.u.back();
            else {
                const std::size_t j = std::size_t(pos);
                const double t = pos - double(j);
                ns.u[i] = (1.0 - t) * s.u[j] + t * s.u[j + 1];
            }
        }
        out.snapshots.push_back(std::move(ns));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian envelope check: u(t,x) <= M e^{Kt} exp(-(x+ct+L1)^2/(4t)) on the
// left tail x <= -ct-L1 and the mirrored bound on the right tail.
// ---------------------------------------------------------------------------
struct ViolationReport {
    struct Entry {
        double t = 0.0;
        double max_excess = 0.0;
        double at_x = 0.0;
        bool evaluated = true;
    };
    std::vector<Entry> entries;
    bool pass = true;
    double worst_excess = 0.0;
};

inline ViolationReport gaussian_bound_check(const Trajectory& traj, double K,
                                            double L1, double L2, double M,
                                            double t_min = 1.0, double tol = 1e-8) {
    ViolationReport rep;
    const double c = traj.problem.c, dx = traj.problem.dx;
    for (const auto& s : traj.snapshots) {
        ViolationReport::Entry e;
        e.t = s.t;
        if (s.t < t_min) {
            e.evaluated = false;
            rep.entries.push_back(e);
            continue;
        }
        const double pref = M * std::exp(K * s.t);
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            const double x = s.x0 + double(i) * dx;
            double env = 1e300;
            if (x <= -c * s.t - L1) {
                const double z = x + c * s.t + L1;
                env = pref * std::exp(-z * z / (4.0 * s.t));
            } else if (x >= L2 - c * s.t) {
                const double z = x + c * s.t - L2;
                env = pref * std::exp(-z * z / (4.0 * s.t));
            } else {
                continue;
            }
            const double excess = s.u[i] - env;
            if (excess > e.max_excess) { e.max_excess = excess; e.at_x = x; }
        }
        if (e.max_excess > tol) rep.pass = false;
        rep.worst_excess = std::max(rep.worst_excess, e.max_excess);
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace frontlab

#endif
