#include <doctest.h>

#include <cmath>

#include "quantomc/models.hpp"
#include "quantomc/schemes.hpp"
#include "quantomc/stats.hpp"
#include "quantomc/stochastics.hpp"

using namespace qmc;

namespace {

CoefficientSet zero_model() {
    CoefficientSet cs;
    const auto zero = [](double, double) { return 0.0; };
    cs.m = zero;
    cs.s = zero;
    cs.s_prime = zero;
    cs.c = zero;
    cs.domain = {-1e300, 1e300};
    return cs;
}

// Additive noise: s constant in the state, s' = 0.
CoefficientSet additive_model(double drift, double vol) {
    CoefficientSet cs = zero_model();
    cs.m = [drift](double, double) { return drift; };
    cs.s = [vol](double, double) { return vol; };
    return cs;
}

CoefficientSet garch_set(double kappa, double theta, double sigma) {
    SvParams p;
    p.variant = SvTag::Garch;
    p.kappa = kappa;
    p.theta = theta;
    p.sigma = sigma;
    return sv_coefficients(p);
}

StepInput make_input(double x, double dt, double z, double dj = 0.0) {
    return StepInput{x, 0.0, dt, std::sqrt(dt) * z, z, dj};
}

}  // namespace

TEST_CASE("zero coefficients leave the state unchanged") {
    const CoefficientSet cs = zero_model();
    const StepInput in = make_input(1.7, 0.01, 0.9, 2.0);
    CHECK(euler_step(cs, in) == 1.7);
    CHECK(milstein_step(cs, in) == 1.7);
    CHECK(runge_kutta_step(cs, in) == 1.7);
}

TEST_CASE("heston fixed point with zero noise stays put") {
    SvParams p;
    p.variant = SvTag::Heston;
    p.kappa = 2.0;
    p.theta = 0.04;
    p.sigma = 0.3;
    const CoefficientSet cs = sv_coefficients(p);
    const StepInput in = make_input(0.04, 1.0 / 252.0, 0.0);
    CHECK(euler_step(cs, in) == doctest::Approx(0.04));
}

TEST_CASE("euler step on a GBM asset matches hand substitution") {
    const CoefficientSet cs = asset_coefficients(0.05, 0.04);
    const double dt = 1.0 / 252.0;
    const StepInput in = make_input(100.0, dt, 1.5);
    const double want = 100.0 + 100.0 * 0.05 * dt + 20.0 * std::sqrt(dt) * 1.5;
    CHECK(euler_step(cs, in) == doctest::Approx(want).epsilon(1e-14));
    CHECK(euler_step(cs, in) == doctest::Approx(101.9097).epsilon(1e-5));
}

TEST_CASE("milstein correction") {
    SUBCASE("vanishes when z^2 = 1") {
        const CoefficientSet cs = garch_set(2.0, 0.04, 0.5);
        for (double z : {1.0, -1.0}) {
            const StepInput in = make_input(0.1, 1.0 / 252.0, z);
            CHECK(milstein_step(cs, in) == doctest::Approx(euler_step(cs, in)).epsilon(1e-15));
        }
    }
    SUBCASE("vanishes for additive noise") {
        const CoefficientSet cs = additive_model(0.1, 0.3);
        for (double z : {-2.0, -0.5, 0.0, 0.7, 2.5}) {
            const StepInput in = make_input(1.0, 0.01, z);
            CHECK(milstein_step(cs, in) == euler_step(cs, in));
        }
    }
    SUBCASE("GARCH correction equals (1/2) s s' dt (z^2-1)") {
        const CoefficientSet cs = garch_set(2.0, 0.04, 0.5);
        const double dt = 1.0 / 252.0;
        const StepInput in = make_input(0.1, dt, 2.0);
        const double corr = milstein_step(cs, in) - euler_step(cs, in);
        CHECK(corr == doctest::Approx(0.5 * 0.05 * 0.5 * dt * 3.0).epsilon(1e-12));
        CHECK(corr == doctest::Approx(1.488e-4).epsilon(1e-3));
    }
}

TEST_CASE("runge-kutta step") {
    SUBCASE("equals euler when s is constant") {
        const CoefficientSet cs = additive_model(0.1, 0.3);
        for (double z : {-2.0, 0.3, 1.9}) {
            const StepInput in = make_input(1.0, 0.01, z);
            CHECK(runge_kutta_step(cs, in) == euler_step(cs, in));
        }
    }
    SUBCASE("support value is x + m dt + s sqrt(dt) without jumps") {
        // With s linear the correction reconstructs the support value exactly.
        const CoefficientSet cs = garch_set(2.0, 0.04, 0.5);
        const double x = 0.1, dt = 1.0 / 252.0, z = 2.0;
        const StepInput in = make_input(x, dt, z);
        const double m = cs.m(x, 0.0);
        const double s = cs.s(x, 0.0);
        const double support = x + m * dt + s * std::sqrt(dt);
        const double want = x + m * dt + s * in.dw +
                            0.5 * (cs.s(support, 0.0) - s) * std::sqrt(dt) * (z * z - 1.0);
        CHECK(runge_kutta_step(cs, in) == doctest::Approx(want).epsilon(1e-15));
    }
    SUBCASE("approaches milstein as dt shrinks on a GARCH point") {
        const CoefficientSet cs = garch_set(2.0, 0.04, 0.5);
        auto rel_gap = [&](double dt) {
            const StepInput in = make_input(0.1, dt, 2.0);
            const double rk = runge_kutta_step(cs, in);
            const double mil = milstein_step(cs, in);
            return std::fabs(rk - mil) / std::fabs(mil);
        };
        CHECK(rel_gap(1.0 / 1024.0) <= 1e-3);
        // The correction gap scales like dt^{3/2}.
        const double ratio = rel_gap(1.0 / 256.0) / rel_gap(1.0 / 1024.0);
        CHECK(ratio == doctest::Approx(8.0).epsilon(0.25));
    }
}

TEST_CASE("jump term enters all schemes identically and vanishes at dj = 0") {
    SvParams p;
    p.variant = SvTag::GarchJump;
    p.kappa = 2.0;
    p.theta = 0.04;
    p.sigma = 0.5;
    p.zeta = 0.8;
    p.jump = JumpParams{4.0, 0.02, 0.01};
    const CoefficientSet with_jumps = sv_coefficients(p);
    const CoefficientSet no_jumps = garch_set(2.0, 0.04, 0.5);

    const StepInput quiet = make_input(0.1, 1.0 / 252.0, 1.3, 0.0);
    CHECK(euler_step(with_jumps, quiet) == euler_step(no_jumps, quiet));
    CHECK(milstein_step(with_jumps, quiet) == milstein_step(no_jumps, quiet));
    CHECK(runge_kutta_step(with_jumps, quiet) == runge_kutta_step(no_jumps, quiet));

    const StepInput jumped = make_input(0.1, 1.0 / 252.0, 1.3, 0.05);
    CHECK(euler_step(with_jumps, jumped) ==
          doctest::Approx(euler_step(with_jumps, quiet) + 0.8 * 0.05).epsilon(1e-15));
    CHECK(milstein_step(with_jumps, jumped) - milstein_step(with_jumps, quiet) ==
          doctest::Approx(0.8 * 0.05).epsilon(1e-12));
}

TEST_CASE("all schemes agree for constant s, no jumps, z^2 = 1") {
    const CoefficientSet cs = additive_model(0.2, 0.4);
    for (double z : {1.0, -1.0}) {
        const StepInput in = make_input(3.0, 0.05, z);
        const double e = euler_step(cs, in);
        CHECK(milstein_step(cs, in) == e);
        CHECK(runge_kutta_step(cs, in) == e);
    }
}

TEST_CASE("one-step euler mean and variance match m dt and s^2 dt") {
    SvParams p;
    p.variant = SvTag::Heston;
    p.kappa = 2.0;
    p.theta = 0.04;
    p.sigma = 0.3;
    const CoefficientSet cs = sv_coefficients(p);
    const double x0 = 0.09, dt = 1.0 / 252.0;
    const PathStream stream{17, 0, ProcessTag::VarUsdW};
    RunningStats stats;
    const std::size_t n = 1'000'000;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = stream.normal(i, 0);
        stats.add(euler_step(cs, make_input(x0, dt, z)));
    }
    const double m = cs.m(x0, 0.0);
    const double s = cs.s(x0, 0.0);
    const double se_mean = s * std::sqrt(dt) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(stats.mean() - (x0 + m * dt)) <= 4.0 * se_mean);
    const double var_want = s * s * dt;
    const double se_var = var_want * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::fabs(stats.sample_variance() - var_want) <= 4.0 * se_var);
}

TEST_CASE("runge-kutta clamps the support value to the domain") {
    // Wright-Fisher near the boundary: the raw support value would exceed 1,
    // where s would see a negative argument.
    ScParams p;
    p.variant = ScTag::WrightFisher;
    p.kappa = 1.0;
    p.rho_bar = 0.0;
    p.sigma = 1.5;
    const CoefficientSet cs = sc_coefficients(p);
    const StepInput in = make_input(0.995, 1.0 / 12.0, 2.5);
    const double next = runge_kutta_step(cs, in);
    CHECK(std::isfinite(next));
}

TEST_CASE("scheme names round-trip") {
    for (SchemeChoice s : {SchemeChoice::Euler, SchemeChoice::Milstein, SchemeChoice::RungeKutta}) {
        CHECK(parse_scheme(to_string(s)) == s);
    }
    const CoefficientSet cs = additive_model(0.1, 0.2);
    const StepInput in = make_input(1.0, 0.01, 0.5);
    CHECK(step(SchemeChoice::Euler, cs, in) == euler_step(cs, in));
    CHECK(step(SchemeChoice::Milstein, cs, in) == milstein_step(cs, in));
    CHECK(step(SchemeChoice::RungeKutta, cs, in) == runge_kutta_step(cs, in));
}
