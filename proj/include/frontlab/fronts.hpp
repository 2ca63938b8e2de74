#ifndef FRONTLAB_FRONTS_HPP
#define FRONTLAB_FRONTS_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "frontlab/common.hpp"
#include "frontlab/solver.hpp"
#include "frontlab/waves.hpp"

namespace frontlab {

enum class Side { left, right };

// Level-set position time series for one level and one side. Snapshots with
// no crossing are kept as gaps so windows stay aligned with time.
struct FrontTrace {
    double level = 0.5;
    Side side = Side::left;
    std::vector<double> t;
    std::vector<std::optional<double>> position;

    std::size_t count_in(double t1, double t2) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] >= t1 && t[i] <= t2 && position[i]) ++n;
        return n;
    }
};

struct SpeedFit {
    double speed = 0.0;
    double intercept = 0.0;
    double stderr_speed = 0.0;
    double t1 = 0.0, t2 = 0.0;
    std::size_t n = 0;
};

struct LogDelayFit {
    double a = 0.0;   // linear coefficient
    double b = 0.0;   // ln t coefficient
    double c0 = 0.0;  // constant
    double rms = 0.0;
    double t1 = 0.0, t2 = 0.0;
    bool a_frozen = false;
};

struct ProfileMatch {
    double shift = 0.0;
    double sup_error = 0.0;
    double x_a = 0.0, x_b = 0.0;
    double sigma = 0.0;
    bool mirrored = false;
};

// Leftmost/rightmost crossing of the level by full scan and linear
// interpolation; snapshots are not assumed monotone.
inline FrontTrace trace_level(const Trajectory& traj, double rho, Side side) {
    if (!(rho > 0.0 && rho < 1.0)) throw invalid_parameter("trace_level: rho must be in (0,1)");
    FrontTrace tr;
    tr.level = rho;
    tr.side = side;
    const double dx = traj.problem.dx;
    for (const auto& s : traj.snapshots) {
        tr.t.push_back(s.t);
        std::optional<double> pos;
        const std::size_t n = s.u.size();
        if (side == Side::left) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double a = s.u[i] - rho, b = s.u[i + 1] - rho;
                if (a == 0.0) { pos = s.x0 + double(i) * dx; break; }
                if (a * b < 0.0) {
                    pos = s.x0 + (double(i) + a / (a - b)) * dx;
                    break;
                }
            }
            if (!pos && s.u[n - 1] == rho) pos = s.x0 + double(n - 1) * dx;
        } else {
            for (std::size_t i = n - 1; i-- > 0;) {
                const double a = s.u[i] - rho, b = s.u[i + 1] - rho;
                if (b == 0.0) { pos = s.x0 + double(i + 1) * dx; break; }
                if (a * b < 0.0) {
                    pos = s.x0 + (double(i) + a / (a - b)) * dx;
                    break;
                }
            }
            if (!pos && s.u[0] == rho) pos = s.x0;
        }
        tr.position.push_back(pos);
    }
    return tr;
}

inline SpeedFit fit_speed(const FrontTrace& trace, double t1, double t2,
                          std::size_t min_samples = 50) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        if (trace.t[i] >= t1 && trace.t[i] <= t2 && trace.position[i]) {
            xs.push_back(trace.t[i]);
            ys.push_back(*trace.position[i]);
        }
    }
    if (xs.size() < min_samples)
        throw numerical_error("fit_speed: insufficient samples in window");
    const LinearFit f = ols_line(xs, ys);
    return SpeedFit{f.slope, f.intercept, f.stderr_slope, t1, t2, f.n};
}

/// Least squares position ~ a t + b ln t + c0. When fixed_a is supplied the
/// linear coefficient is frozen and only (b, c0) are fitted.
inline LogDelayFit fit_log_delay(const FrontTrace& trace, double t1, double t2,
                                 std::optional<double> fixed_a = std::nullopt,
                                 std::size_t min_samples = 200) {
    std::vector<double> ts, ps;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        if (trace.t[i] >= t1 && trace.t[i] <= t2 && trace.t[i] > 0.0 && trace.position[i]) {
            ts.push_back(trace.t[i]);
            ps.push_back(*trace.position[i]);
        }
    }
    if (ts.size() < min_samples)
        throw numerical_error("fit_log_delay: insufficient samples in window");
    LogDelayFit fit;
    fit.t1 = t1;
    fit.t2 = t2;
    if (fixed_a) {
        fit.a = *fixed_a;
        fit.a_frozen = true;
        std::vector<double> lt(ts.size()), y(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            lt[i] = std::log(ts[i]);
            y[i] = ps[i] - fit.a * ts[i];
        }
        const LinearFit f = ols_line(lt, y);
        fit.b = f.slope;
        fit.c0 = f.intercept;
    } else {
        double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double B[3] = {0, 0, 0};
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double v[3] = {ts[i], std::log(ts[i]), 1.0};
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) A[a][b] += v[a] * v[b];
                B[a] += v[a] * ps[i];
            }
        }
        double out[3];
        try {
            solve3x3(A, B, out);
        } catch (const numerical_error&) {
            throw numerical_error("fit_log_delay: fit-degenerate design matrix");
        }
        fit.a = out[0];
        fit.b = out[1];
        fit.c0 = out[2];
    }
    double ss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = ps[i] - (fit.a * ts[i] + fit.b * std::log(ts[i]) + fit.c0);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / double(ts.size()));
    return fit;
}

// ---------------------------------------------------------------------------
// Best sup-norm match of a snapshot against a shifted traveling-wave profile
// phi(x - sigma t + xi) (or phi(-x - sigma t + xi) with mirrored=true).
// Coarse scan at dx spacing, then golden-section refinement.
// ---------------------------------------------------------------------------
inline ProfileMatch match_profile(const Trajectory& traj, double t,
                                  const WaveProfile& wave, double sigma,
                                  double x_a, double x_b, bool mirrored = false) {
    const std::size_t j = traj.snapshot_index(t);
    const Snapshot& s = traj.snapshots[j];
    const double dx = traj.problem.dx;
    const double grid_lo = s.x0;
    const double grid_hi = s.x0 + double(s.u.size() - 1) * dx;
    if (x_a < grid_lo - 1e-9 || x_b > grid_hi + 1e-9 || x_a >= x_b)
        throw invalid_parameter("match_profile: window outside the domain");

    const double tt = s.t;
    auto sup_err = [&](double xi) {
        double worst = 0.0;
        for (double x = x_a; x <= x_b + 1e-12; x += dx) {
            const double arg = (mirrored ? -x : x) - sigma * tt + xi;
            const double e = std::fabs(traj.value_at(j, x) - wave.eval(arg));
            if (e > worst) worst = e;
        }
        return worst;
    };

    // center the scan where the data and profile cross the half level
    double x_half = 0.5 * (x_a + x_b);
    {
        double prev = traj.value_at(j, x_a);
        for (double x = x_a + dx; x <= x_b + 1e-12; x += dx) {
            const double cur = traj.value_at(j, x);
            if ((prev - 0.5) * (cur - 0.5) <= 0.0 && prev != cur) {
                x_half = x - dx + dx * (prev - 0.5) / (prev - cur);
                break;
            }
            prev = cur;
        }
    }
    double s_half = 0.0;
    {
        double lo = wave.s0, hi = wave.s_end();
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (wave.eval(mid) > 0.5) lo = mid; else hi = mid;
        }
        s_half = 0.5 * (lo + hi);
    }
    const double xi0 = s_half - ((mirrored ? -x_half : x_half) - sigma * tt);

    double best_xi = xi0, best = sup_err(xi0);
    const double span = 0.25 * (x_b - x_a) + 10.0;
    for (double xi = xi0 - span; xi <= xi0 + span; xi += dx) {
        const double e = sup_err(xi);
        if (e < best) { best = e; best_xi = xi; }
    }
    best_xi = golden_minimize(sup_err, best_xi - dx, best_xi + dx, 1e-12);
    return ProfileMatch{best_xi, sup_err(best_xi), x_a, x_b, sigma, mirrored};
}

} // namespace frontlab

#endif
