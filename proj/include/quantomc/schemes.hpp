#pragma once

#include <string>

#include "quantomc/models.hpp"

namespace qmc {

enum class SchemeChoice { Euler, Milstein, RungeKutta };

std::string to_string(SchemeChoice scheme);
SchemeChoice parse_scheme(const std::string& name);

/// One step's inputs. dW = sqrt(dt) * z holds exactly; dj is the cumulative
/// jump total for the step (0 when the model has no jumps).
struct StepInput {
    double x = 0.0;
    double t = 0.0;
    double dt = 0.0;
    double dw = 0.0;
    double z = 0.0;
    double dj = 0.0;
};

/// x + m dt + s dW + c dJ. The caller clamps the result to the domain.
double euler_step(const CoefficientSet& c, const StepInput& in);

/// Euler plus the second diffusion term (1/2) s s' dt (z^2 - 1); the jump
/// term is added once, identically to Euler's.
double milstein_step(const CoefficientSet& c, const StepInput& in);

/// Milstein-order step with the diffusion derivative replaced by the
/// support-value difference: the support value is x + m dt + s sqrt(dt)
/// (plus c dJ when jumps are active) and is domain-clamped before s is
/// re-evaluated on it.
double runge_kutta_step(const CoefficientSet& c, const StepInput& in);

double step(SchemeChoice scheme, const CoefficientSet& c, const StepInput& in);

}  // namespace qmc
