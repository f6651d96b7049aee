#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive quadrature: depth exhausted");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double black_scholes_call(double s0, double strike, double rate, double sigma, double horizon) {
    if (sigma <= 0.0 || horizon <= 0.0) {
        return std::max(s0 - strike * std::exp(-rate * horizon), 0.0);
    }
    const double st = sigma * std::sqrt(horizon);
    const double d1 = (std::log(s0 / strike) + (rate + 0.5 * sigma * sigma) * horizon) / st;
    const double d2 = d1 - st;
    return s0 * norm_cdf(d1) - strike * std::exp(-rate * horizon) * norm_cdf(d2);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

double upper_incomplete_gamma_quadrature(double a, double x) {
    // Integrate t^{a-1} e^{-t} from x far enough that the truncated tail is
    // negligible at the comparison tolerance.
    const double upper = x + 80.0 + 20.0 * a;
    auto integrand = [a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); };
    const double scale = std::max(integrand(std::max(x, 1e-300)), 1e-300);
    return integrate(integrand, x, upper, 1e-14 * std::max(scale, 1.0));
}

namespace {

// E[max(c, d * e^{g Z} - k)] for Z ~ N(0,1), c >= 0, d > 0, k > 0.
double conditional_best(double c, double d, double g, double k) {
    if (g <= 0.0) return std::max(c, d - k);
    const double zstar = std::log((c + k) / d) / g;
    return c * norm_cdf(zstar) + d * std::exp(0.5 * g * g) * norm_cdf(g - zstar) -
           k * norm_cdf(-zstar);
}

}  // namespace

double best_of_two_price(const BestOfTwoSetup& s, double rho) {
    if (!(std::fabs(rho) < 1.0)) throw std::runtime_error("best_of_two_price: |rho| must be < 1");
    const double t = s.horizon;
    // Deterministic FX: sigma_fx = 0 leaves only the rate-differential drift.
    const double fx_t = s.fx0 * std::exp((s.r_f1 - s.r_d) * t);
    // GBP leg conditioned on its own normal X; USD leg mixes X with an
    // independent normal through rho.
    const double gbp_scale = s.s0_gbp * fx_t * std::exp((s.r_f1 - 0.5 * s.v_gbp) * t);
    const double gbp_vol = std::sqrt(s.v_gbp * t);
    const double usd_drift = (s.r_d - 0.5 * s.v_usd) * t;
    const double usd_vol = std::sqrt(s.v_usd * t);
    const double g = usd_vol * std::sqrt(1.0 - rho * rho);

    auto inner = [&](double x) {
        const double leg_gbp = gbp_scale * std::exp(gbp_vol * x) - s.k2;
        const double c = std::max(leg_gbp, 0.0);
        const double d = s.s0_usd * std::exp(usd_drift + usd_vol * rho * x);
        return conditional_best(c, d, g, s.k1) * norm_pdf(x);
    };

    // Split the outer integral at the GBP-leg kink so each piece is smooth.
    const double limit = 12.0;
    const double x_kink = (std::log(s.k2 / gbp_scale)) / gbp_vol;
    double total = 0.0;
    if (x_kink > -limit && x_kink < limit) {
        total = integrate(inner, -limit, x_kink, 1e-11) + integrate(inner, x_kink, limit, 1e-11);
    } else {
        total = integrate(inner, -limit, limit, 1e-11);
    }
    return std::exp(-s.r_d * t) * total;
}

double best_of_two_cora(const BestOfTwoSetup& setup, double rho, double h) {
    return (best_of_two_price(setup, rho + h) - best_of_two_price(setup, rho - h)) / (2.0 * h);
}

double best_of_two_gora(const BestOfTwoSetup& setup, double rho, double h) {
    return (best_of_two_price(setup, rho + h) - 2.0 * best_of_two_price(setup, rho) +
            best_of_two_price(setup, rho - h)) /
           (h * h);
}

}  // namespace oracles
