#ifndef FRONTLAB_REACTION_HPP
#define FRONTLAB_REACTION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "frontlab/common.hpp"

namespace frontlab {

enum class ReactionKind { kpp, bistable, modified };

// ---------------------------------------------------------------------------
// Scalar nonlinearity. Three concrete families:
//   kpp      f(u) = r u (1-u)
//   bistable f(u) = k u (1-u)(u-theta)
//   modified bistable raised near u=1 so that the upper zero moves to 1+eps
//            while f stays equal to the cubic on (-inf, 1-eps]
// Values are immutable after construction.
// ---------------------------------------------------------------------------
struct Reaction {
    ReactionKind kind = ReactionKind::kpp;
    double r = 0.0;      // kpp: f'(0)
    double k = 0.0;      // bistable amplitude
    double theta = 0.0;  // unstable zero
    double eps = 0.0;    // modification width (modified only)
    double m = 0.0;      // modification gain (modified only)

    double eval(double s) const {
        switch (kind) {
        case ReactionKind::kpp:
            return r * s * (1.0 - s);
        case ReactionKind::bistable:
            return k * s * (1.0 - s) * (s - theta);
        case ReactionKind::modified: {
            const double fb = k * s * (1.0 - s) * (s - theta);
            const double z = (s - (1.0 - eps)) / (2.0 * eps);
            const double S = smoothstep5(z);
            return (1.0 - S) * fb + S * m * (1.0 + eps - s);
        }
        }
        return 0.0;
    }

    double deriv(double s) const {
        switch (kind) {
        case ReactionKind::kpp:
            return r * (1.0 - 2.0 * s);
        case ReactionKind::bistable:
            return k * ((1.0 - 2.0 * s) * (s - theta) + s * (1.0 - s));
        case ReactionKind::modified: {
            const double fb = k * s * (1.0 - s) * (s - theta);
            const double fbp = k * ((1.0 - 2.0 * s) * (s - theta) + s * (1.0 - s));
            const double z = (s - (1.0 - eps)) / (2.0 * eps);
            const double S = smoothstep5(z);
            const double Sp = smoothstep5_deriv(z) / (2.0 * eps);
            return (1.0 - S) * fbp - Sp * fb + Sp * m * (1.0 + eps - s) - S * m;
        }
        }
        return 0.0;
    }

    /// Upper stable zero (1 for kpp/bistable, 1+eps for modified).
    double top() const { return kind == ReactionKind::modified ? 1.0 + eps : 1.0; }
};

inline Reaction build_kpp(double r) {
    if (!(r > 0.0)) throw invalid_parameter("build_kpp: r must be positive");
    Reaction f;
    f.kind = ReactionKind::kpp;
    f.r = r;
    return f;
}

inline Reaction build_cubic_bistable(double k, double theta) {
    if (!(k > 0.0)) throw invalid_parameter("build_cubic_bistable: k must be positive");
    if (!(theta > 0.0 && theta < 1.0))
        throw invalid_parameter("build_cubic_bistable: theta must lie in (0,1)");
    Reaction f;
    f.kind = ReactionKind::bistable;
    f.k = k;
    f.theta = theta;
    return f;
}

// ---------------------------------------------------------------------------
// Modified bistable nonlinearity with upper zero at 1+eps and f_{b,eps} >= f_b.
// The gain m is tuned by bisection to the smallest value for which the grid
// checks pass, then padded by 20%.
// ---------------------------------------------------------------------------
inline bool modified_reaction_valid(const Reaction& f) {
    const double eps = f.eps, theta = f.theta;
    Reaction fb = build_cubic_bistable(f.k, theta);
    const int n = 4000;
    const double lo = -0.2, hi = 1.0 + 2.0 * eps + 0.2;
    // f >= f_b everywhere, equality left of 1-eps
    for (int i = 0; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        const double v = f.eval(s), vb = fb.eval(s);
        if (v < vb - 1e-12) return false;
        if (s <= 1.0 - eps && std::fabs(v - vb) > 1e-12) return false;
    }
    // zeros and sign pattern: f > 0 on (theta, 1+eps), f < 0 beyond 1+eps
    if (std::fabs(f.eval(1.0 + eps)) > 1e-12) return false;
    for (int i = 1; i < n; ++i) {
        const double s = theta + (1.0 + eps - theta) * i / n;
        if (f.eval(s) <= 0.0) return false;
    }
    if (f.eval(1.0 + 1.5 * eps) >= 0.0) return false;
    // decreasing on [1-eps, 1+eps]
    for (int i = 0; i <= n; ++i) {
        const double s = 1.0 - eps + 2.0 * eps * i / n;
        if (f.deriv(s) > 1e-12) return false;
    }
    return true;
}

inline Reaction build_modified_bistable(double k, double theta, double eps) {
    if (!(eps > 0.0 && eps < 0.5 * (1.0 - theta)))
        throw invalid_parameter("build_modified_bistable: need 0 < eps < (1-theta)/2");
    Reaction f = build_cubic_bistable(k, theta);
    f.kind = ReactionKind::modified;
    f.eps = eps;
    // the admissible gains form a window: m too small lets f dip below f_b
    // inside (1-eps, 1+eps), m too large pulls f below f_b beyond 1+eps, so
    // scan a geometric ladder for a first valid gain instead of doubling up
    double m_lo = 0.0;
    double m_hi = -1.0;
    for (double cand = 1.0 / 4096.0; cand < 1e6; cand *= 1.25) {
        f.m = cand;
        if (modified_reaction_valid(f)) {
            m_hi = cand;
            break;
        }
    }
    if (m_hi < 0.0)
        throw numerical_error("build_modified_bistable: no admissible gain found");
    f.m = m_hi;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (m_lo + m_hi);
        f.m = mid;
        if (modified_reaction_valid(f)) m_hi = mid; else m_lo = mid;
    }
    f.m = 1.2 * m_hi;
    if (!modified_reaction_valid(f))
        f.m = m_hi;
    return f;
}

// ---------------------------------------------------------------------------
// Spatially heterogeneous blend: f_m left of -L, f_b right of L, quintic
// smoothstep ramp in between.
// ---------------------------------------------------------------------------
struct HeterogeneousField {
    Reaction left;   // KPP side
    Reaction right;  // bistable side
    double L = 0.0;

    double chi(double x) const { return smoothstep5((x + L) / (2.0 * L)); }

    double eval(double x, double s) const {
        if (x <= -L) return left.eval(s);
        if (x >= L) return right.eval(s);
        const double c = chi(x);
        return (1.0 - c) * left.eval(s) + c * right.eval(s);
    }

    /// d/ds of the blended reaction at (x, s).
    double deriv_s(double x, double s) const {
        if (x <= -L) return left.deriv(s);
        if (x >= L) return right.deriv(s);
        const double c = chi(x);
        return (1.0 - c) * left.deriv(s) + c * right.deriv(s);
    }
};

inline HeterogeneousField build_blend(const Reaction& fm, const Reaction& fb, double L) {
    if (fm.kind != ReactionKind::kpp)
        throw invalid_parameter("build_blend: left reaction must be KPP class");
    if (fb.kind != ReactionKind::bistable)
        throw invalid_parameter("build_blend: right reaction must be bistable class");
    if (!(L > 0.0)) throw invalid_parameter("build_blend: L must be positive");
    return HeterogeneousField{fm, fb, L};
}

// ---------------------------------------------------------------------------
// Grid-sampled check of the standing hypotheses on f(x, s).
// ---------------------------------------------------------------------------
struct HypothesisCheck {
    std::string name;
    double max_violation = 0.0;
    double at_x = 0.0;
    double at_s = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    bool pass = true;
};

inline ValidationReport validate_hypotheses(const HeterogeneousField& field,
                                            double s_max, int n_x, int n_s,
                                            double tol = 1e-12) {
    if (!(s_max >= 1.5)) throw invalid_parameter("validate_hypotheses: s_max must be >= 1.5");
    if (n_x < 64 || n_s < 64) throw invalid_parameter("validate_hypotheses: grid sizes must be >= 64");

    ValidationReport rep;
    const double x_span = 2.0 * field.L + 10.0;

    auto record = [&](HypothesisCheck c) {
        c.pass = c.max_violation <= tol;
        rep.pass = rep.pass && c.pass;
        rep.checks.push_back(std::move(c));
    };

    // zeros at s = 0 and s = 1, for all x
    {
        HypothesisCheck c0{"f(x,0)=0"}, c1{"f(x,1)=0"};
        for (int i = 0; i <= n_x; ++i) {
            const double x = -x_span + 2.0 * x_span * i / n_x;
            const double v0 = std::fabs(field.eval(x, 0.0));
            const double v1 = std::fabs(field.eval(x, 1.0));
            if (v0 > c0.max_violation) { c0.max_violation = v0; c0.at_x = x; }
            if (v1 > c1.max_violation) { c1.max_violation = v1; c1.at_x = x; c1.at_s = 1.0; }
        }
        record(c0);
        record(c1);
    }

    // d/ds f(x,1) < 0
    {
        HypothesisCheck c{"ds_f(x,1)<0"};
        for (int i = 0; i <= n_x; ++i) {
            const double x = -x_span + 2.0 * x_span * i / n_x;
            const double d = field.deriv_s(x, 1.0);
            if (d > c.max_violation) { c.max_violation = d; c.at_x = x; c.at_s = 1.0; }
        }
        record(c);
    }

    // f(x,s) <= 0 for s >= 1
    {
        HypothesisCheck c{"f<=0 for s>=1"};
        for (int i = 0; i <= n_x; ++i) {
            const double x = -x_span + 2.0 * x_span * i / n_x;
            for (int j = 0; j <= n_s; ++j) {
                const double s = 1.0 + (s_max - 1.0) * j / n_s;
                const double v = field.eval(x, s);
                if (v > c.max_violation) { c.max_violation = v; c.at_x = x; c.at_s = s; }
            }
        }
        record(c);
    }

    // monotone nonincreasing in x on [-L, L]
    {
        HypothesisCheck c{"dx_f<=0 on [-L,L]"};
        for (int i = 0; i < n_x; ++i) {
            const double x0 = -field.L + 2.0 * field.L * i / n_x;
            const double x1 = -field.L + 2.0 * field.L * (i + 1) / n_x;
            for (int j = 0; j <= n_s; ++j) {
                const double s = s_max * j / n_s;
                const double dfx = field.eval(x1, s) - field.eval(x0, s);
                if (dfx > c.max_violation) { c.max_violation = dfx; c.at_x = x0; c.at_s = s; }
            }
        }
        record(c);
    }

    return rep;
}

} // namespace frontlab

#endif
