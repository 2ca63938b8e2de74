#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frontlab/reaction.hpp"
#include "frontlab/waves.hpp"

using namespace frontlab;

TEST_CASE("kpp_min_speed formula") {
    CHECK(kpp_min_speed(build_kpp(1.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(kpp_min_speed(build_kpp(0.7)) == doctest::Approx(1.6733200531).epsilon(1e-9));
    CHECK(kpp_min_speed(build_kpp(0.25)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)kpp_min_speed(build_cubic_bistable(1.0, 0.3)), invalid_parameter);
}

TEST_CASE("kpp_decay_rate formula and subcritical error") {
    const Reaction fm = build_kpp(1.0);
    CHECK(kpp_decay_rate(fm, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kpp_decay_rate(fm, 2.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS((void)kpp_decay_rate(fm, 1.9), wrong_regime);
}

TEST_CASE("bistable front: cubic closed-form speed and profile") {
    // c_b = sqrt(k) (1 - 2 theta) / sqrt(2); profile 1/(1 + e^{sqrt(k) s / sqrt(2)})
    for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const Reaction fb = build_cubic_bistable(1.0, theta);
        const WaveProfile phi = bistable_front(fb);
        const double cb_exact = (1.0 - 2.0 * theta) / std::sqrt(2.0);
        INFO("theta=", theta);
        CHECK(std::fabs(phi.speed - cb_exact) <= 1e-6);
        // shift so the closed form passes through theta at 0
        const double shift = -std::sqrt(2.0) * std::log(1.0 / theta - 1.0);
        double sup = 0.0;
        for (double s = -15.0; s <= 15.0; s += 0.01) {
            const double exact = 1.0 / (1.0 + std::exp((s - shift) / std::sqrt(2.0)));
            sup = std::max(sup, std::fabs(phi.eval(s) - exact));
        }
        CHECK(sup <= 1e-4);
        CHECK(phi.eval(0.0) == doctest::Approx(theta).epsilon(1e-6));
    }
    // k rescales the speed by sqrt(k)
    const WaveProfile phik = bistable_front(build_cubic_bistable(4.0, 0.3));
    CHECK(std::fabs(phik.speed - 2.0 * (1.0 - 0.6) / std::sqrt(2.0)) <= 1e-6);
}

TEST_CASE("bistable front: decay rates match the linearization") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    const double cb = phi.speed;
    const double alpha = 0.5 * (cb + std::sqrt(cb * cb - 4.0 * fb.deriv(0.0)));
    const double beta = 0.5 * (-cb + std::sqrt(cb * cb - 4.0 * fb.deriv(1.0)));
    CHECK(phi.decay_plus == doctest::Approx(alpha).epsilon(1e-6));
    CHECK(phi.decay_minus == doctest::Approx(beta).epsilon(1e-6));
    CHECK(alpha == doctest::Approx(0.7071068).epsilon(1e-4));
    CHECK(beta == doctest::Approx(0.7071068).epsilon(1e-4));
    // tail log-slope regression within 2%
    auto log_slope = [&](double s1, double s2, bool right) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double s = s1; s <= s2; s += 0.05, ++n) {
            const double v = right ? phi.eval(s) : 1.0 - phi.eval(s);
            sx += s; sy += std::log(v); sxx += s * s; sxy += s * std::log(v);
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(log_slope(8.0, 12.0, true) == doctest::Approx(-alpha).epsilon(0.02));
    CHECK(log_slope(-12.0, -8.0, false) == doctest::Approx(beta).epsilon(0.02));
}

TEST_CASE("bistable front: ODE residual and monotonicity") {
    const Reaction fb = build_cubic_bistable(1.0, 0.3);
    const WaveProfile phi = bistable_front(fb);
    // interior centered-difference residual of phi'' + c phi' + f(phi)
    const double h = phi.ds;
    double worst = 0.0;
    for (std::size_t i = 200; i + 200 < phi.phi.size(); i += 7) {
        const double p0 = phi.phi[i - 1], p1 = phi.phi[i], p2 = phi.phi[i + 1];
        const double res = (p0 - 2.0 * p1 + p2) / (h * h) + phi.speed * (p2 - p0) / (2.0 * h) + fb.eval(p1);
        worst = std::max(worst, std::fabs(res));
    }
    CHECK(worst < 1e-5);
    for (std::size_t i = 1; i < phi.phi.size(); ++i) CHECK(phi.phi[i] < phi.phi[i - 1]);
}

TEST_CASE("bistable front rejects non-bistable input") {
    CHECK_THROWS((void)bistable_front(build_kpp(0.7)));
}

TEST_CASE("kpp_front: supercritical tail rate") {
    const Reaction fm = build_kpp(1.0);
    const WaveProfile phi = kpp_front(fm, 2.5);
    CHECK(phi.decay_plus == doctest::Approx(0.5).epsilon(1e-6));
    // log slope of the computed tail over s in [20,40]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double s = 20.0; s <= 40.0; s += 0.1, ++n) {
        sx += s; sy += std::log(phi.eval(s)); sxx += s * s; sxy += s * std::log(phi.eval(s));
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.02));
    // monotone, level-half normalization
    CHECK(phi.eval(0.0) == doctest::Approx(0.5).epsilon(1e-6));
    for (std::size_t i = 1; i < phi.phi.size(); ++i) CHECK(phi.phi[i] < phi.phi[i - 1]);
    CHECK_THROWS_AS((void)kpp_front(fm, 1.9), wrong_regime);
}

TEST_CASE("kpp_front: critical tail carries the linear prefactor") {
    const Reaction fm = build_kpp(1.0);
    const WaveProfile phi = kpp_front(fm, 2.0);
    CHECK(phi.decay_plus == doctest::Approx(1.0).epsilon(1e-6));
    // phi(s) e^{s} / s approaches a positive constant
    std::vector<double> ratios;
    for (double s = 15.0; s <= 25.0; s += 1.0) ratios.push_back(phi.eval(s) * std::exp(s) / s);
    for (double v : ratios) CHECK(v > 0.0);
    for (std::size_t i = 1; i < ratios.size(); ++i)
        CHECK(ratios[i] == doctest::Approx(ratios[0]).epsilon(0.1));
    // log(phi)/s -> -1
    CHECK(std::log(phi.eval(30.0)) / 30.0 == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("two-sided tail envelopes with slack factor 2") {
    const WaveProfile phi = bistable_front(build_cubic_bistable(1.0, 0.3));
    for (double s = 6.0; s <= 14.0; s += 0.25) {
        const double env = phi.amp_plus * std::exp(-phi.decay_plus * (s - phi.s_end()));
        CHECK(phi.eval(s) <= 2.0 * env);
        CHECK(phi.eval(s) >= 0.5 * env);
    }
}

TEST_CASE("speed ordering c_m > c_b") {
    CHECK(speed_ordering_check(build_kpp(0.7), build_cubic_bistable(1.0, 0.3)));
    CHECK(speed_ordering_check(build_kpp(0.05), build_cubic_bistable(1.0, 0.3)));
    CHECK(speed_ordering_check(build_kpp(0.05), build_cubic_bistable(1.0, 0.95)));
}
