#pragma once

#include <cstddef>
#include <cstdint>

namespace testsupport {

struct ConvergenceSlopes {
    double euler = 0.0;
    double milstein = 0.0;
    double runge_kutta = 0.0;
};

/// Pathwise RMS error at T of each stepper against the exact GBM solution,
/// driven by the same Brownian path across dt in {1/32, ..., 1/512}; returns
/// the log-log regression slope per scheme.
ConvergenceSlopes strong_convergence_slopes(std::size_t n_paths, std::uint64_t seed = 7777);

}  // namespace testsupport
