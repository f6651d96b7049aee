#pragma once

#include <cstdint>

#include "quantomc/models.hpp"

namespace qmc {

/// One identifier per Brownian motion and per jump process in the model.
/// Streams for distinct tags are statistically independent.
enum class ProcessTag : std::uint64_t {
    AssetGbpW = 0,   // base Brownian shared through the correlation mixing
    AssetUsdZ = 1,   // independent component mixed into the USD asset
    AssetEurZ = 2,   // independent component mixed into the EUR asset
    VarUsdW = 3,
    VarGbpW = 4,
    VarEurW = 5,
    CorrW = 6,
    FxGbpZ = 7,
    FxEurZ = 8,
    VarUsdJ = 9,
    VarGbpJ = 10,
    VarEurJ = 11,
    FxGbpJ = 12,
    FxEurJ = 13,
};

/// Counter-based random stream addressed by (seed, path, tag). Each draw is
/// a pure function of (seed, path, tag, step, draw index): identical inputs
/// give identical values regardless of worker count or execution order, so
/// any number of workers may draw concurrently without coordination.
struct PathStream {
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    ProcessTag tag = ProcessTag::AssetGbpW;

    /// Uniform draw in the open interval (0, 1).
    double uniform(std::uint64_t step, std::uint64_t draw) const;

    /// Standard normal draw via inverse-CDF transform of uniform().
    double normal(std::uint64_t step, std::uint64_t draw) const;
};

/// Cumulative jump effect over one step: count ~ Poisson(lambda*dt) and
/// total = sum of count i.i.d. N(mu_j, sigma_j^2) sizes.
struct JumpIncrement {
    std::int64_t count = 0;
    double total = 0.0;
};

/// Brownian increment sqrt(dt) * Z for the stream's (path, tag, step) slot.
double gaussian_increment(const PathStream& stream, std::uint64_t step, double dt);

JumpIncrement jump_increment(const PathStream& stream, std::uint64_t step, double dt,
                             const JumpParams& p);

/// rho * dW_base + sqrt(1 - rho^2) * dZ_indep.
double mix_correlated(double dw_base, double dz_indep, double rho);

/// Antithetic counterpart of a Gaussian increment. Jump increments are never
/// negated; antithetic twins share jump counts and sizes.
constexpr double antithetic_of(double increment) { return -increment; }

}  // namespace qmc
