#include "quantomc/schemes.hpp"

#include <cmath>

#include "quantomc/errors.hpp"

namespace qmc {

std::string to_string(SchemeChoice scheme) {
    switch (scheme) {
        case SchemeChoice::Euler: return "euler";
        case SchemeChoice::Milstein: return "milstein";
        case SchemeChoice::RungeKutta: return "runge_kutta";
    }
    return "?";
}

SchemeChoice parse_scheme(const std::string& name) {
    if (name == "euler") return SchemeChoice::Euler;
    if (name == "milstein") return SchemeChoice::Milstein;
    if (name == "runge_kutta") return SchemeChoice::RungeKutta;
    throw ConfigError("unknown scheme '" + name + "'; valid schemes: euler, milstein, runge_kutta");
}

double euler_step(const CoefficientSet& c, const StepInput& in) {
    return in.x + c.m(in.x, in.t) * in.dt + c.s(in.x, in.t) * in.dw + c.c(in.x, in.t) * in.dj;
}

double milstein_step(const CoefficientSet& c, const StepInput& in) {
    const double correction =
        0.5 * c.s(in.x, in.t) * c.s_prime(in.x, in.t) * in.dt * (in.z * in.z - 1.0);
    return euler_step(c, in) + correction;
}

double runge_kutta_step(const CoefficientSet& c, const StepInput& in) {
    const double m = c.m(in.x, in.t);
    const double s = c.s(in.x, in.t);
    const double jump = c.c(in.x, in.t) * in.dj;
    const double sqrt_dt = std::sqrt(in.dt);
    // Support value includes the jump term when jumps are active.
    const double support = c.domain.clamp(in.x + m * in.dt + s * sqrt_dt + jump);
    const double correction =
        0.5 * (c.s(support, in.t) - s) * sqrt_dt * (in.z * in.z - 1.0);
    return in.x + m * in.dt + s * in.dw + correction + jump;
}

double step(SchemeChoice scheme, const CoefficientSet& c, const StepInput& in) {
    switch (scheme) {
        case SchemeChoice::Euler: return euler_step(c, in);
        case SchemeChoice::Milstein: return milstein_step(c, in);
        case SchemeChoice::RungeKutta: return runge_kutta_step(c, in);
    }
    return in.x;
}

}  // namespace qmc
