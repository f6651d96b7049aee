#include "quantomc/stochastics.hpp"

#include <cmath>

#include "quantomc/errors.hpp"
#include "quantomc/special_functions.hpp"

namespace qmc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer: full-avalanche bijection on 64-bit words.
constexpr std::uint64_t avalanche(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-mode hash of the draw coordinates. Chaining one avalanche per
// coordinate keeps distinct (seed, path, tag, step, draw) tuples on
// statistically independent outputs.
constexpr std::uint64_t word_at(std::uint64_t seed, std::uint64_t path, std::uint64_t tag,
                                std::uint64_t step, std::uint64_t draw) {
    std::uint64_t h = avalanche(seed + kGolden);
    h = avalanche(h + kGolden * (path + 1));
    h = avalanche(h + kGolden * (tag + 1));
    h = avalanche(h + kGolden * (step + 1));
    h = avalanche(h + kGolden * (draw + 1));
    return h;
}

}  // namespace

double PathStream::uniform(std::uint64_t step, std::uint64_t draw) const {
    const std::uint64_t w = word_at(seed, path, static_cast<std::uint64_t>(tag), step, draw);
    // Top 53 bits, centered so the result is strictly inside (0, 1).
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

double PathStream::normal(std::uint64_t step, std::uint64_t draw) const {
    return norm_ppf(uniform(step, draw));
}

double gaussian_increment(const PathStream& stream, std::uint64_t step, double dt) {
    if (!(dt > 0.0)) throw InvalidParameterError("gaussian_increment: dt must be > 0");
    return std::sqrt(dt) * stream.normal(step, 0);
}

JumpIncrement jump_increment(const PathStream& stream, std::uint64_t step, double dt,
                             const JumpParams& p) {
    if (!(dt > 0.0)) throw InvalidParameterError("jump_increment: dt must be > 0");
    p.validate();
    JumpIncrement out;
    const double mean = p.lambda * dt;
    if (mean <= 0.0) return out;

    // Poisson count by inversion; exact and deterministic for the small
    // lambda*dt values a daily grid produces. Draw index 0 is reserved for
    // the inversion uniform, indices 1..count for the jump sizes.
    const double u = stream.uniform(step, 0);
    double pmf = std::exp(-mean);
    double cdf = pmf;
    std::int64_t count = 0;
    while (u > cdf && count < 1000) {
        ++count;
        pmf *= mean / static_cast<double>(count);
        cdf += pmf;
    }
    out.count = count;
    for (std::int64_t i = 1; i <= count; ++i) {
        out.total += p.mu_j + p.sigma_j * stream.normal(step, static_cast<std::uint64_t>(i));
    }
    return out;
}

double mix_correlated(double dw_base, double dz_indep, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw InvalidParameterError("mix_correlated: rho must lie in [-1, 1]");
    }
    return rho * dw_base + std::sqrt(1.0 - rho * rho) * dz_indep;
}

}  // namespace qmc
