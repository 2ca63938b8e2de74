#ifndef FRONTLAB_WAVES_HPP
#define FRONTLAB_WAVES_HPP

#include <cmath>
#include <vector>

#include "frontlab/common.hpp"
#include "frontlab/reaction.hpp"

namespace frontlab {

enum class Normalization { phi_at_zero_equals_theta, level_half_at_zero };

// ---------------------------------------------------------------------------
// Sampled monotone front profile with its wave speed. phi and phi' are kept
// on a uniform grid so that evaluation anywhere (including the exponential
// tails outside the computed window) is cheap and smooth.
// ---------------------------------------------------------------------------
struct WaveProfile {
    Reaction reaction;
    double speed = 0.0;
    double s0 = 0.0;   // abscissa of the first sample
    double ds = 0.0;
    std::vector<double> phi;
    std::vector<double> dphi;
    double decay_plus = 0.0;   // rate at +inf (alpha or lambda_nu)
    double decay_minus = 0.0;  // rate at -inf (beta)
    double amp_plus = 0.0;     // tail amplitude fitted at the right window edge
    double amp_minus = 0.0;
    double top = 1.0;          // limit at -inf
    Normalization normalization = Normalization::phi_at_zero_equals_theta;

    double s_end() const { return s0 + ds * double(phi.size() - 1); }

    double eval(double s) const {
        if (s <= s0)
            return top - amp_minus * std::exp(decay_minus * (s - s0));
        if (s >= s_end())
            return amp_plus * std::exp(-decay_plus * (s - s_end()));
        return hermite(s, false);
    }

    double eval_deriv(double s) const {
        if (s <= s0)
            return -amp_minus * decay_minus * std::exp(decay_minus * (s - s0));
        if (s >= s_end())
            return -amp_plus * decay_plus * std::exp(-decay_plus * (s - s_end()));
        return hermite(s, true);
    }

private:
    // Cubic Hermite interpolation using the stored derivative samples.
    double hermite(double s, bool want_deriv) const {
        const double u = (s - s0) / ds;
        std::size_t i = std::min<std::size_t>(std::size_t(u), phi.size() - 2);
        const double t = u - double(i);
        const double p0 = phi[i], p1 = phi[i + 1];
        const double m0 = dphi[i] * ds, m1 = dphi[i + 1] * ds;
        if (!want_deriv) {
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            const double h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t);
            const double h11 = t * t * (t - 1);
            return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
        }
        const double d00 = 6 * t * (t - 1);
        const double d10 = (1 - t) * (1 - 3 * t);
        const double d01 = -6 * t * (t - 1);
        const double d11 = t * (3 * t - 2);
        return (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / ds;
    }
};

inline double kpp_min_speed(const Reaction& fm) {
    if (fm.kind != ReactionKind::kpp)
        throw invalid_parameter("kpp_min_speed: reaction is not KPP class");
    return 2.0 * std::sqrt(fm.deriv(0.0));
}

inline double kpp_decay_rate(const Reaction& fm, double nu) {
    const double cm = kpp_min_speed(fm);
    if (nu < cm - 1e-14)
        throw wrong_regime("kpp_decay_rate: subcritical speed nu < c_m");
    const double disc = std::max(nu * nu - 4.0 * fm.deriv(0.0), 0.0);
    return 0.5 * (nu - std::sqrt(disc));
}

namespace detail {

enum class ShotOutcome { overshoot, undershoot, connected };

struct ShotResult {
    ShotOutcome outcome;
    std::vector<double> phi, dphi; // samples at step hs, starting at the seed
};

// Integrates phi'' + nu phi' + f(phi) = 0 from the unstable manifold of the
// top equilibrium, with RK4. Stops on overshoot (phi < 0), undershoot
// (phi' >= 0 while phi in (0, top)), or once phi has decayed below floor.
inline ShotResult shoot(const Reaction& f, double nu, double top, double hs,
                        double s_span, bool record) {
    // unstable-manifold seed: phi = top - d, phi' = -beta (top - phi)
    const double ftop = f.deriv(top);
    if (!(ftop < 0.0)) throw numerical_error("shoot: top equilibrium is not stable");
    const double beta = 0.5 * (-nu + std::sqrt(nu * nu - 4.0 * ftop));
    const double d = 1e-8;
    double y = top - d;
    double v = -beta * d;
    ShotResult res;
    res.outcome = ShotOutcome::connected;
    const long nmax = long(s_span / hs) + 1;
    if (record) {
        res.phi.reserve(std::size_t(nmax) + 1);
        res.dphi.reserve(std::size_t(nmax) + 1);
    }
    auto acc = [&](double yy, double vv) { return -nu * vv - f.eval(yy); };
    for (long n = 0; n < nmax; ++n) {
        if (record) { res.phi.push_back(y); res.dphi.push_back(v); }
        const double k1y = v, k1v = acc(y, v);
        const double k2y = v + 0.5 * hs * k1v, k2v = acc(y + 0.5 * hs * k1y, v + 0.5 * hs * k1v);
        const double k3y = v + 0.5 * hs * k2v, k3v = acc(y + 0.5 * hs * k2y, v + 0.5 * hs * k2v);
        const double k4y = v + hs * k3v, k4v = acc(y + hs * k3y, v + hs * k3v);
        y += hs / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        v += hs / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (y < 0.0) { res.outcome = ShotOutcome::overshoot; break; }
        if (v >= 0.0 && y < top - 10.0 * d) { res.outcome = ShotOutcome::undershoot; break; }
        if (y < 1e-12) break;
    }
    if (record) { res.phi.push_back(y); res.dphi.push_back(v); }
    // a shot that stalls above zero (it can spiral into an interior
    // equilibrium without v ever reaching 0) also falls short
    if (res.outcome == ShotOutcome::connected && y > 1e-6)
        res.outcome = ShotOutcome::undershoot;
    return res;
}

// Recenters a recorded shot so that phi(0) = level, and fits tail constants.
inline WaveProfile finish_profile(const Reaction& f, double nu, double top, double hs,
                                  std::vector<double> phi, std::vector<double> dphi,
                                  double level, Normalization norm) {
    WaveProfile w;
    w.reaction = f;
    w.speed = nu;
    w.ds = hs;
    w.top = top;
    w.normalization = norm;
    // crossing of the normalization level
    double s_shift = 0.0;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
        if ((phi[i] - level) * (phi[i + 1] - level) <= 0.0 && phi[i] != phi[i + 1]) {
            const double t = (phi[i] - level) / (phi[i] - phi[i + 1]);
            s_shift = hs * (double(i) + t);
            break;
        }
    }
    w.s0 = -s_shift;
    w.phi = std::move(phi);
    w.dphi = std::move(dphi);
    // decay rates from the linearizations at the two equilibria
    const double f0 = f.deriv(0.0), f1 = f.deriv(top);
    w.decay_plus = 0.5 * (nu + std::sqrt(std::max(nu * nu - 4.0 * f0, 0.0)));
    w.decay_minus = 0.5 * (-nu + std::sqrt(nu * nu - 4.0 * f1));
    w.amp_plus = w.phi.back();
    w.amp_minus = top - w.phi.front();
    return w;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Unique bistable front: phase-plane shooting from the saddle at u = top,
// bisecting on the speed until the trajectory connects to u = 0.
// Normalized with phi(0) = theta.
// ---------------------------------------------------------------------------
inline WaveProfile bistable_front(const Reaction& fb, double tol = 1e-9) {
    if (fb.kind != ReactionKind::bistable && fb.kind != ReactionKind::modified)
        throw invalid_parameter("bistable_front: reaction is not bistable class");
    if (!(tol > 1e-12 && tol < 1e-4))
        throw invalid_parameter("bistable_front: tol out of range");

    const double top = fb.top();
    const double scale = std::sqrt(fb.k > 0 ? fb.k : 1.0);
    double lo = -3.0 * scale, hi = 3.0 * scale;
    const double hs = 1e-3;
    const double s_span = 200.0;

    auto outcome = [&](double nu) {
        return detail::shoot(fb, nu, top, hs, s_span, false).outcome;
    };
    // undershoot <=> speed too large, overshoot <=> too small
    detail::ShotOutcome olo = outcome(lo), ohi = outcome(hi);
    if (olo != detail::ShotOutcome::overshoot || ohi != detail::ShotOutcome::undershoot)
        throw numerical_error("bistable_front: no heteroclinic bracket (no-connection)");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const auto o = outcome(mid);
        if (o == detail::ShotOutcome::undershoot) hi = mid;
        else lo = mid;
    }
    const double cb = 0.5 * (lo + hi);

    // final shot at the bracket edge that still overshoots would leave the
    // tail hanging; record at the midpoint and trim at the decay floor
    auto rec = detail::shoot(fb, cb, top, hs, s_span, true);
    // trim trailing samples after phi drops below a floor, or where the
    // mis-closure of the shooting would pollute the stored profile
    const double f0 = fb.deriv(0.0);
    const double lam = 0.5 * (cb + std::sqrt(cb * cb - 4.0 * f0));
    std::size_t nkeep = rec.phi.size();
    for (std::size_t i = 0; i < rec.phi.size(); ++i) {
        if (rec.phi[i] < 1e-9 || rec.phi[i] > top || rec.dphi[i] > 0.0) { nkeep = i; break; }
        // shooting divergence shows up as a wrong logarithmic slope in the tail
        if (rec.phi[i] < 1e-2 &&
            std::fabs(rec.dphi[i] + lam * rec.phi[i]) > 0.03 * lam * rec.phi[i]) {
            nkeep = i;
            break;
        }
    }
    if (nkeep < 10) throw numerical_error("bistable_front: degenerate profile");
    rec.phi.resize(nkeep);
    rec.dphi.resize(nkeep);
    return detail::finish_profile(fb, cb, top, hs, std::move(rec.phi), std::move(rec.dphi),
                                  fb.theta, Normalization::phi_at_zero_equals_theta);
}

// ---------------------------------------------------------------------------
// KPP front of speed nu >= c_m, shooting from the saddle at u = 1 toward 0.
// Normalized with phi(0) = 1/2.
// ---------------------------------------------------------------------------
inline WaveProfile kpp_front(const Reaction& fm, double nu, double tol = 1e-9) {
    (void)tol;
    const double cm = kpp_min_speed(fm);
    if (nu < cm - 1e-12)
        throw wrong_regime("kpp_front: subcritical speed nu < c_m");
    const double hs = 1e-3;
    const double lam = kpp_decay_rate(fm, nu);
    const double s_span = std::min(400.0, 60.0 / std::min(lam, 1.0) + 40.0);
    auto rec = detail::shoot(fm, nu, 1.0, hs, s_span, true);
    if (rec.outcome == detail::ShotOutcome::overshoot)
        throw numerical_error("kpp_front: trajectory overshot zero");
    std::size_t nkeep = rec.phi.size();
    for (std::size_t i = 0; i < rec.phi.size(); ++i) {
        if (rec.phi[i] < 1e-11 || rec.dphi[i] > 0.0) { nkeep = i; break; }
    }
    rec.phi.resize(nkeep);
    rec.dphi.resize(nkeep);
    WaveProfile w = detail::finish_profile(fm, nu, 1.0, hs, std::move(rec.phi),
                                           std::move(rec.dphi), 0.5,
                                           Normalization::level_half_at_zero);
    w.decay_plus = lam; // decay of the actual tail (slow root for nu > c_m)
    return w;
}

inline bool speed_ordering_check(const Reaction& fm, const Reaction& fb) {
    return kpp_min_speed(fm) > bistable_front(fb).speed;
}

} // namespace frontlab

#endif
