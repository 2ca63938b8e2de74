#ifndef FRONTLAB_BARRIERS_HPP
#define FRONTLAB_BARRIERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "frontlab/common.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/solver.hpp"
#include "frontlab/waves.hpp"

namespace frontlab {

// ---------------------------------------------------------------------------
// Compactly supported subsolution bump eta * Psi with
// Psi(x) = exp(-cx/2) cos(pi x / (2R)) on [-R, R].
// ---------------------------------------------------------------------------
struct BumpSpec {
    double R = 0.0;
    double eta = 0.0;
    double c = 0.0;
    double eps = 0.0;

    double psi(double x) const {
        if (std::fabs(x) >= R) return 0.0;
        return std::exp(-0.5 * c * x) * std::cos(0.5 * M_PI * x / R);
    }

    double eval(double x) const { return eta * psi(x); }
    double support_lo() const { return -R; }
    double support_hi() const { return R; }

    /// -(eta Psi)'' - c (eta Psi)' reduces to eta Psi (q^2 + c^2/4) with
    /// q = pi/(2R); the subsolution residual is that minus f_m(eta Psi).
    double subsolution_residual(double x, const Reaction& fm) const {
        const double q = 0.5 * M_PI / R;
        const double v = eval(x);
        return v * (q * q + 0.25 * c * c) - fm.eval(v);
    }
};

inline BumpSpec bump_admissible(double c, const Reaction& fm, double eps) {
    const double r0 = fm.deriv(0.0);
    const double radicand = r0 - eps - 0.25 * c * c;
    if (!(radicand > 0.0))
        throw wrong_regime("bump_admissible: no admissible bump (|c| >= c_m up to eps)");
    const double R_min = 0.5 * M_PI / std::sqrt(radicand);
    BumpSpec spec;
    spec.R = 1.1 * R_min;
    spec.c = c;
    spec.eps = eps;

    auto admissible = [&](double eta) {
        BumpSpec s = spec;
        s.eta = eta;
        const int n = 2000;
        for (int i = 1; i < n; ++i) {
            const double x = -s.R + 2.0 * s.R * i / n;
            if (s.subsolution_residual(x, fm) > 1e-14) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 1.0;
    while (!admissible(hi) && hi > 1e-12) hi *= 0.5;
    if (hi <= 1e-12) throw numerical_error("bump_admissible: no admissible amplitude");
    // grow toward the largest admissible amplitude
    while (admissible(2.0 * hi) && hi < 1.0) hi *= 2.0;
    lo = hi;
    double bad = 2.0 * hi;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + bad);
        if (admissible(mid)) lo = mid; else bad = mid;
    }
    spec.eta = lo;
    return spec;
}

// ---------------------------------------------------------------------------
// Fife-McLeod barrier parameters. The rightward pair pins the solution to the
// bistable front phi(x - (c_b - c)t); the leftward variant uses the mirrored
// frame phi(-x - (c_b + c)t).
// ---------------------------------------------------------------------------
enum class BarrierDirection { rightward, leftward };

struct FifeMcLeodParams {
    double mu = 0.0;
    double delta = 0.0;
    double C = 0.0;
    double kappa = 0.0;
    double omega = 0.0;
    double B = 0.0;      // envelope offset (rightward); A for leftward
    BarrierDirection direction = BarrierDirection::rightward;
    double c = 0.0;      // advection rate
    double cb = 0.0;     // bistable speed
    double max_abs_fbp = 0.0; // max |f_b'| over the barrier value range
};

namespace detail {

inline double max_abs_deriv(const Reaction& fb, double lo, double hi) {
    double m = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i)
        m = std::max(m, std::fabs(fb.deriv(lo + (hi - lo) * i / n)));
    return m;
}

inline bool deriv_below(const Reaction& fb, double bound, double lo, double hi) {
    const int n = 2000;
    for (int i = 0; i <= n; ++i)
        if (fb.deriv(lo + (hi - lo) * i / n) > bound) return false;
    return true;
}

} // namespace detail

inline FifeMcLeodParams fm_params(const WaveProfile& phi, double c,
                                  BarrierDirection direction) {
    const Reaction& fb = phi.reaction;
    const double cb = phi.speed;
    const double fb0 = fb.deriv(0.0), fb1 = fb.deriv(1.0);
    if (direction == BarrierDirection::rightward) {
        if (!(c < cb)) throw wrong_regime("fm_params: rightward barrier needs c < c_b");
    } else {
        if (!(c + cb < 0.0)) throw wrong_regime("fm_params: leftward barrier needs c + c_b < 0");
    }

    FifeMcLeodParams p;
    p.direction = direction;
    p.c = c;
    p.cb = cb;

    // mu below the quadratic-root bound, with 20% slack
    const double minf = std::min(std::fabs(fb0), std::fabs(fb1));
    const double mu_bound = 0.5 * (c + std::sqrt(c * c + 2.0 * minf));
    if (!(mu_bound > 0.0)) throw numerical_error("fm_params: empty mu range");
    p.mu = 0.8 * mu_bound;

    // delta below its four bounds, shrinking until the derivative-range
    // conditions hold on the stated intervals
    const double gap = (direction == BarrierDirection::rightward) ? (cb - c) : -(cb + c);
    const double dmax = (direction == BarrierDirection::rightward) ? 0.5 : 0.2;
    double delta = 0.8 * std::min(std::min(p.mu * gap, dmax),
                                  std::min(0.5 * std::fabs(fb0), 0.5 * std::fabs(fb1)));
    for (int it = 0; it < 60; ++it) {
        bool ok;
        if (direction == BarrierDirection::rightward)
            ok = detail::deriv_below(fb, 0.5 * fb0, -2.0 * delta, 3.0 * delta) &&
                 detail::deriv_below(fb, 0.5 * fb1, 1.0 - 3.0 * delta, 1.0 + 2.0 * delta);
        else
            ok = detail::deriv_below(fb, 0.5 * fb0, 0.0, 3.0 * delta) &&
                 detail::deriv_below(fb, 0.5 * fb1, 1.0 - delta, 1.0 + 2.0 * delta);
        if (ok) break;
        delta *= 0.5;
        if (it == 59) throw numerical_error("fm_params: no admissible delta");
    }
    p.delta = delta;

    // C from the profile levels, padded
    double C1 = phi.s_end(), C2 = -phi.s0;
    {
        double lo = phi.s0, hi = phi.s_end();
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (phi.eval(mid) > delta) lo = mid; else hi = mid;
        }
        C1 = hi;
        lo = phi.s0; hi = phi.s_end();
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (phi.eval(mid) > 1.0 - 0.5 * delta) lo = mid; else hi = mid;
        }
        C2 = -lo;
    }
    // additive padding: a multiplicative one would collapse kappa (the
    // profile slope decays exponentially) and blow up omega and B
    p.C = std::max(std::max(C1, C2), 1.0) + 0.2;

    // kappa below the least slope magnitude on [-C, C]
    double kmin = 1e300;
    for (double s = -p.C; s <= p.C; s += 0.01)
        kmin = std::min(kmin, -phi.eval_deriv(s));
    if (!(kmin > 0.0)) throw numerical_error("fm_params: profile not strictly decreasing on [-C,C]");
    p.kappa = kmin / 1.2;

    // max |f_b'| over the range the barrier visits
    const double range_lo = (direction == BarrierDirection::rightward) ? -2.0 * delta : 0.0;
    p.max_abs_fbp = detail::max_abs_deriv(fb, range_lo, 1.0 + 2.0 * delta);

    // omega from the kink estimate, with slack
    p.omega = 1.2 * (2.0 * delta + p.max_abs_fbp) / p.kappa;

    // envelope offset so the e^{-mu x} term is dominated in the middle case
    const double amp = p.max_abs_fbp + p.mu * p.mu - c * p.mu;
    if (direction == BarrierDirection::rightward) {
        p.B = p.omega + 1.2 * std::log(std::max(amp / delta, 1.0)) / p.mu + 1.0;
    } else {
        p.B = p.omega + p.C + 1.2 * std::log(std::max(amp / delta, 1.0)) / p.mu + 1.0; // = A
    }
    return p;
}

/// Re-checks the recipe inequalities independently of the construction path.
inline bool fm_params_satisfy(const FifeMcLeodParams& p, const WaveProfile& phi) {
    const Reaction& fb = phi.reaction;
    const double fb0 = fb.deriv(0.0), fb1 = fb.deriv(1.0);
    const double minf = std::min(std::fabs(fb0), std::fabs(fb1));
    if (!(p.mu > 0.0 && p.mu < 0.5 * (p.c + std::sqrt(p.c * p.c + 2.0 * minf)))) return false;
    const bool rightward = p.direction == BarrierDirection::rightward;
    const double gap = rightward ? (p.cb - p.c) : -(p.cb + p.c);
    const double dmax = rightward ? 0.5 : 0.2;
    if (!(p.delta > 0.0 && p.delta < std::min(std::min(p.mu * gap, dmax),
                                              0.5 * std::min(std::fabs(fb0), std::fabs(fb1)))))
        return false;
    if (rightward) {
        if (!detail::deriv_below(fb, 0.5 * fb0, -2.0 * p.delta, 3.0 * p.delta)) return false;
        if (!detail::deriv_below(fb, 0.5 * fb1, 1.0 - 3.0 * p.delta, 1.0 + 2.0 * p.delta)) return false;
    } else {
        if (!detail::deriv_below(fb, 0.5 * fb0, 0.0, 3.0 * p.delta)) return false;
        if (!detail::deriv_below(fb, 0.5 * fb1, 1.0 - p.delta, 1.0 + 2.0 * p.delta)) return false;
    }
    if (!(phi.eval(-p.C) >= 1.0 - 0.5 * p.delta && phi.eval(p.C) <= p.delta)) return false;
    for (double s = -p.C; s <= p.C; s += 0.01)
        if (!(phi.eval_deriv(s) <= -p.kappa)) return false;
    if (!(p.kappa * p.omega >= 2.0 * p.delta + p.max_abs_fbp)) return false;
    const double amp = p.max_abs_fbp + p.mu * p.mu - p.c * p.mu;
    if (rightward) {
        if (!(p.B > p.omega)) return false;
        if (!(amp * std::exp(-p.mu * (p.B - p.omega)) <= p.delta)) return false;
    } else {
        if (!(p.B > p.omega + p.C)) return false;
        if (!(amp * std::exp(-p.mu * (p.B - p.omega - p.C)) <= p.delta)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Pointwise certification of the parabolic residual of the barrier ansatz.
// The residual is evaluated analytically: phi'' is eliminated through the
// profile ODE, the exponentials are exact.
// ---------------------------------------------------------------------------
enum class BarrierKind { super, sub };

struct ResidualReport {
    bool pass = true;
    double worst_margin = 1e300; // min (super) / -max (sub) of the signed residual
    double worst_t = 0.0, worst_x = 0.0;
    double worst_xi = 0.0;       // moving-frame coordinate at the worst point
    std::size_t points = 0;
    // Certified per-case lower bounds on the signed residual, following the
    // three-case comparison argument: xi <= -C (index 0), |xi| <= C (1),
    // xi >= C (2).  The middle-case bound carries the kappa*omega term, so it
    // is the one that degrades when omega is chosen too small, even though
    // the pointwise residual itself barely moves (kappa is a tail slope, so
    // the recipe's omega has a large pointwise safety factor).
    double case_margin[3] = {1e300, 1e300, 1e300};
    std::size_t case_points[3] = {0, 0, 0};
    int failing_case = -1;       // index of the worst certified-bound failure
};

inline ResidualReport check_barrier_residual(const FifeMcLeodParams& p,
                                             const WaveProfile& phi,
                                             double t_lo, double t_hi, double t_step,
                                             double x_lo, double x_hi, double x_step,
                                             BarrierKind kind, double tol = 1e-10) {
    const Reaction& fb = phi.reaction;
    const bool rightward = p.direction == BarrierDirection::rightward;
    const bool super = kind == BarrierKind::super;
    if (!rightward && !super)
        throw invalid_parameter("check_barrier_residual: leftward barrier is a supersolution only");

    ResidualReport rep;
    rep.worst_margin = 1e300;
    const double sgn = super ? 1.0 : -1.0;
    for (double t = t_lo; t <= t_hi + 1e-12; t += t_step) {
        const double tau = t - t_lo;
        const double edt = std::exp(-p.delta * tau);
        for (double x = x_lo; x <= x_hi + 1e-12; x += x_step) {
            const double emx = std::exp(-p.mu * (x - x_lo));
            double xi, w;
            if (rightward && super)
                xi = x - x_lo - (p.cb - p.c) * tau + p.omega * edt - p.omega - p.B - p.C;
            else if (rightward)
                xi = x - x_lo - (p.cb - p.c) * tau - p.omega * edt + p.omega - p.B - p.C;
            else
                xi = -x + x_lo - (p.cb + p.c) * tau + p.omega * edt - p.omega + p.B;
            const double pv = phi.eval(xi);
            const double pd = phi.eval_deriv(xi);
            w = pv + sgn * (p.delta * edt + p.delta * emx);
            // N w with phi'' eliminated through phi'' = -c_b phi' - f_b(phi)
            const double res = fb.eval(pv) - fb.eval(w)
                             - sgn * pd * p.omega * p.delta * edt
                             - sgn * p.delta * p.delta * edt
                             - sgn * (p.mu * p.mu - p.c * p.mu) * p.delta * emx;
            const double margin = sgn * res;
            ++rep.points;
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.worst_t = t;
                rep.worst_x = x;
                rep.worst_xi = xi;
            }
            // certified lower bound for sgn * res at this point, by case
            const int cs = xi <= -p.C ? 0 : (xi >= p.C ? 2 : 1);
            double cert;
            const double mm = p.mu * p.mu - p.c * p.mu;
            if (cs == 1) {
                cert = (p.kappa * p.omega - p.max_abs_fbp - p.delta) * p.delta * edt
                     - (p.max_abs_fbp + mm) * p.delta * emx;
            } else {
                const double half = -0.5 * (cs == 0 ? fb.deriv(1.0) : fb.deriv(0.0));
                cert = (half - p.delta) * p.delta * edt + (half - mm) * p.delta * emx;
            }
            ++rep.case_points[cs];
            rep.case_margin[cs] = std::min(rep.case_margin[cs], cert);
        }
    }
    rep.pass = rep.worst_margin >= -tol;
    double worst_cert = 0.0;
    for (int cs = 0; cs < 3; ++cs) {
        if (rep.case_points[cs] == 0) continue;
        if (rep.case_margin[cs] < -tol && rep.case_margin[cs] < worst_cert) {
            worst_cert = rep.case_margin[cs];
            rep.failing_case = cs;
            rep.pass = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Static blocking supersolution of Prop 5.1 type: flat at phi_eps(-A) left of
// L, shifted modified-bistable front right of L.
// ---------------------------------------------------------------------------
struct BlockingSupersolution {
    WaveProfile phi_eps;     // front of the modified nonlinearity
    double A = 0.0;
    double L = 0.0;
    double c = 0.0;
    double speed_eps = 0.0;  // c_{b,eps}
    bool residual_pass = true;
    double worst_residual = 0.0; // most negative residual on the checked grid
    bool flat_piece_above_one = true;

    double eval(double x) const {
        if (x <= L) return phi_eps.eval(-A);
        return phi_eps.eval(x - A - L);
    }
};

inline BlockingSupersolution static_blocking_supersolution(const Reaction& fb, double eps,
                                                           double c, double A, double L) {
    if (fb.kind != ReactionKind::bistable)
        throw invalid_parameter("static_blocking_supersolution: need a cubic bistable reaction");
    Reaction fbe = build_modified_bistable(fb.k, fb.theta, eps);
    if (!modified_reaction_valid(fbe))
        throw numerical_error("static_blocking_supersolution: bad-modification");
    BlockingSupersolution sup;
    sup.phi_eps = bistable_front(fbe);
    sup.speed_eps = sup.phi_eps.speed;
    sup.A = A;
    sup.L = L;
    sup.c = c;
    {
        WaveProfile plain = bistable_front(fb);
        if (!(c > plain.speed))
            throw wrong_regime("static_blocking_supersolution: need c > c_b");
    }
    if (!(sup.speed_eps < c))
        throw numerical_error("static_blocking_supersolution: c_{b,eps} >= c; shrink eps");

    // flat piece must sit at or above 1
    sup.flat_piece_above_one = sup.phi_eps.eval(-A) >= 1.0 - 1e-12;

    // residual on x >= L: -u'' - c u' - f_b(u)
    //   = (c_{b,eps} - c) phi' + f_{b,eps}(phi) - f_b(phi)  >= 0
    double worst = 1e300;
    for (double x = L; x <= L + 200.0; x += 0.05) {
        const double s = x - A - L;
        const double pv = sup.phi_eps.eval(s);
        const double pd = sup.phi_eps.eval_deriv(s);
        const double res = (sup.speed_eps - c) * pd + fbe.eval(pv) - fb.eval(pv);
        worst = std::min(worst, res);
    }
    // flat piece: residual is -f(x, const) with const >= 1, so f_b(const) <= 0
    {
        const double v = sup.phi_eps.eval(-A);
        worst = std::min(worst, -fb.eval(v));
    }
    sup.worst_residual = worst;
    sup.residual_pass = worst >= -1e-10 && sup.flat_piece_above_one;
    return sup;
}

} // namespace frontlab

#endif
