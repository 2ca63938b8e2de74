#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "frontlab/barriers.hpp"
#include "frontlab/solver.hpp"

using namespace frontlab;

namespace {

Problem homogeneous_bistable(double c, double theta = 0.3, double k = 1.0) {
    const Reaction fb = build_cubic_bistable(k, theta);
    Problem p;
    p.field.left = fb;
    p.field.right = fb;
    p.field.L = 5.0;
    p.c = c;
    return p;
}

// x-extent that keeps the moving front region inside the residual grid
double grid_width(const FifeMcLeodParams& p, double t_hi) {
    const double gap = p.direction == BarrierDirection::rightward ? (p.cb - p.c)
                                                                  : -(p.cb + p.c);
    return p.B + p.C + p.omega + gap * t_hi + 20.0;
}

} // namespace

TEST_CASE("bump_admissible: radius formula, amplitude, residual sign") {
    const Reaction fm = build_kpp(0.7);
    const BumpSpec spec = bump_admissible(0.0, fm, 0.07);

    // R = 1.1 * (pi/2) / sqrt(f'_m(0) - eps - c^2/4)
    CHECK(spec.R == doctest::Approx(1.1 * 0.5 * M_PI / std::sqrt(0.63)).epsilon(1e-12));
    CHECK(spec.R == doctest::Approx(2.1769).epsilon(1e-3));
    CHECK(spec.eta > 0.0);
    CHECK(spec.eta <= 1.0);

    double worst = -1e300;
    for (int i = 1; i < 5000; ++i) {
        const double x = -spec.R + 2.0 * spec.R * i / 5000;
        worst = std::max(worst, spec.subsolution_residual(x, fm));
    }
    CHECK(worst <= 1e-10);

    CHECK(spec.eval(spec.R) == 0.0);
    CHECK(spec.eval(-spec.R - 1.0) == 0.0);
    CHECK(spec.eval(0.0) == doctest::Approx(spec.eta));

    // at the minimal KPP speed the radicand closes: no admissible bump
    CHECK_THROWS_AS(bump_admissible(2.0 * std::sqrt(0.7), fm, 0.07), wrong_regime);
    CHECK_THROWS_AS(bump_admissible(-2.0, fm, 0.07), wrong_regime);
}

TEST_CASE("fm_params: recipe inequalities hold; regime guards") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    const double cb = phi.speed;

    const FifeMcLeodParams p = fm_params(phi, 0.0, BarrierDirection::rightward);
    CHECK(fm_params_satisfy(p, phi));
    CHECK(p.delta < std::min(std::min(p.mu * cb, 0.5), std::min(0.15, 0.35)));
    CHECK(p.kappa * p.omega >= 2.0 * p.delta + p.max_abs_fbp);

    CHECK_THROWS_AS(fm_params(phi, cb, BarrierDirection::rightward), wrong_regime);
    CHECK_THROWS_AS(fm_params(phi, 1.0, BarrierDirection::rightward), wrong_regime);

    const FifeMcLeodParams q = fm_params(phi, -2.0, BarrierDirection::leftward);
    CHECK(fm_params_satisfy(q, phi));
    // mu bound (c + sqrt(c^2 + 2 min|f'|))/2 at c=-2, min|f'|=0.3
    CHECK(q.mu > 0.0);
    CHECK(q.mu < 0.5 * (-2.0 + std::sqrt(4.6)));
    CHECK(0.5 * (-2.0 + std::sqrt(4.6)) == doctest::Approx(0.07238).epsilon(1e-3));
    // leftward needs c + c_b < 0
    CHECK_THROWS_AS(fm_params(phi, -0.1, BarrierDirection::leftward), wrong_regime);
}

TEST_CASE("barrier residual: positive certification in all three cases") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);

    const FifeMcLeodParams p = fm_params(phi, 0.0, BarrierDirection::rightward);
    const double W = grid_width(p, 40.0);
    const ResidualReport sup =
        check_barrier_residual(p, phi, 0.0, 40.0, 0.5, 0.0, W, 0.5, BarrierKind::super);
    CHECK(sup.pass);
    CHECK(sup.worst_margin >= -1e-10);
    CHECK(sup.failing_case == -1);
    // the grid really visits all three cases of the argument
    CHECK(sup.case_points[0] > 0);
    CHECK(sup.case_points[1] > 0);
    CHECK(sup.case_points[2] > 0);

    const ResidualReport sub =
        check_barrier_residual(p, phi, 0.0, 40.0, 0.5, 0.0, W, 0.5, BarrierKind::sub);
    CHECK(sub.pass);

    const FifeMcLeodParams q = fm_params(phi, -2.0, BarrierDirection::leftward);
    const double Wq = grid_width(q, 40.0);
    const ResidualReport left =
        check_barrier_residual(q, phi, 0.0, 40.0, 0.5, 0.0, Wq, 0.5, BarrierKind::super);
    CHECK(left.pass);
    CHECK_THROWS_AS(
        check_barrier_residual(q, phi, 0.0, 40.0, 0.5, 0.0, Wq, 0.5, BarrierKind::sub),
        invalid_parameter);
}

TEST_CASE("barrier residual: omega/10 breaks the middle-case estimate") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    FifeMcLeodParams p = fm_params(phi, 0.0, BarrierDirection::rightward);
    p.omega /= 10.0;
    CHECK(!fm_params_satisfy(p, phi));

    const double W = grid_width(p, 40.0);
    const ResidualReport rep =
        check_barrier_residual(p, phi, 0.0, 40.0, 0.5, 0.0, W, 0.5, BarrierKind::super);
    CHECK(!rep.pass);
    CHECK(rep.failing_case == 1); // |xi| <= C
}

TEST_CASE("barrier residual: delta = 0 reduces to the exact wave") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    FifeMcLeodParams p = fm_params(phi, 0.0, BarrierDirection::rightward);
    p.delta = 0.0;
    const ResidualReport rep =
        check_barrier_residual(p, phi, 0.0, 20.0, 1.0, 0.0, 200.0, 1.0, BarrierKind::super);
    CHECK(rep.pass);
    CHECK(rep.worst_margin == 0.0);
}

TEST_CASE("static blocking supersolution: raised wave, speed continuity") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const double cb = bistable_front(fb).speed;

    const BlockingSupersolution sup = static_blocking_supersolution(fb, 0.05, 1.0, 40.0, 5.0);
    CHECK(sup.speed_eps > cb);
    CHECK(sup.speed_eps < cb + 0.1);
    CHECK(sup.speed_eps < 1.0);
    CHECK(sup.flat_piece_above_one);
    CHECK(sup.residual_pass);
    CHECK(sup.worst_residual >= -1e-10);

    // c_{b,eps} -> c_b as the modification shrinks
    double prev_gap = 1e300;
    for (double eps : {0.05, 0.02, 0.01}) {
        const BlockingSupersolution s = static_blocking_supersolution(fb, eps, 1.0, 40.0, 5.0);
        const double g = s.speed_eps - cb;
        CHECK(g > 0.0);
        CHECK(g < prev_gap);
        prev_gap = g;
    }
    CHECK(prev_gap < 1e-3);

    CHECK_THROWS_AS(static_blocking_supersolution(fb, 0.05, 0.1, 40.0, 5.0), wrong_regime);
}

TEST_CASE("comparison: solution stays under the rightward supersolution") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    const FifeMcLeodParams p = fm_params(phi, 0.0, BarrierDirection::rightward);
    // anchor so the barrier front starts at x = 0
    const double xb = -(p.B + p.C);

    auto barrier = [&](double tau, double x) {
        const double edt = std::exp(-p.delta * tau);
        const double emx = std::exp(-p.mu * (x - xb));
        const double xi =
            x - xb - (p.cb - p.c) * tau + p.omega * edt - p.omega - p.B - p.C;
        return phi.eval(xi) + p.delta * edt + p.delta * emx;
    };

    Problem prob = homogeneous_bistable(0.0);
    prob.x_lo = -150.0;
    prob.x_hi = 150.0;
    const InitialDatum u0{0.8, 20.0, -20.0, 2.0};
    // initial ordering, the hypothesis of the comparison principle
    for (double x = prob.x_lo; x <= prob.x_hi; x += 0.5)
        REQUIRE(u0.eval(x) <= barrier(0.0, x));

    const Trajectory traj = integrate(prob, u0, 40.0, 2.0);
    double worst = -1e300;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        const double t = traj.snapshots[j].t;
        for (double x = prob.x_lo; x <= prob.x_hi; x += 0.5)
            worst = std::max(worst, traj.value_at(j, x) - barrier(t, x));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("comparison: solution stays under the leftward supersolution") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    const FifeMcLeodParams p = fm_params(phi, -2.0, BarrierDirection::leftward);
    // anchor so the barrier front starts at x = 0
    const double xb = -p.B;

    auto barrier = [&](double tau, double x) {
        const double edt = std::exp(-p.delta * tau);
        const double emx = std::exp(-p.mu * (x - xb));
        const double xi = -x + xb - (p.cb + p.c) * tau + p.omega * edt - p.omega + p.B;
        return phi.eval(xi) + p.delta * edt + p.delta * emx;
    };

    Problem prob = homogeneous_bistable(-2.0);
    prob.x_lo = -120.0;
    prob.x_hi = 200.0;
    const InitialDatum u0{0.8, 20.0, 20.0, 2.0};
    for (double x = prob.x_lo; x <= prob.x_hi; x += 0.5)
        REQUIRE(u0.eval(x) <= barrier(0.0, x));

    const Trajectory traj = integrate(prob, u0, 30.0, 2.0);
    double worst = -1e300;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        const double t = traj.snapshots[j].t;
        for (double x = prob.x_lo; x <= prob.x_hi; x += 0.5)
            worst = std::max(worst, traj.value_at(j, x) - barrier(t, x));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("bump-started solution grows monotonically in time") {
    const Reaction fm = build_kpp(0.7);
    const BumpSpec spec = bump_admissible(0.0, fm, 0.07);

    Problem prob;
    prob.field.left = fm;
    prob.field.right = fm;
    prob.field.L = 5.0;
    prob.c = 0.0;
    prob.x_lo = -120.0;
    prob.x_hi = 120.0;

    const Trajectory traj = integrate(prob, spec, 50.0, 1.0);
    double worst_drop = 0.0;
    for (std::size_t j = 1; j < traj.snapshots.size(); ++j)
        for (double x = -110.0; x <= 110.0; x += 0.25)
            worst_drop = std::min(worst_drop,
                                  traj.value_at(j, x) - traj.value_at(j - 1, x));
    CHECK(worst_drop >= -1e-9);
}
