#pragma once

#include <functional>
#include <optional>
#include <string>

namespace qmc {

enum class SvTag { Heston, Garch, GarchJump, Bates, ThreeHalves };
enum class ScTag { WrightFisher, Jacobi, MeanReverting, Weibull, Constant };
enum class SerTag { Gbm, Ou, ExpLevy };

std::string to_string(SvTag tag);
std::string to_string(ScTag tag);
std::string to_string(SerTag tag);
SvTag parse_sv_tag(const std::string& name);
ScTag parse_sc_tag(const std::string& name);
SerTag parse_ser_tag(const std::string& name);

/// Compound-Poisson jump law: Poisson(lambda * dt) count, N(mu_j, sigma_j^2) sizes.
struct JumpParams {
    double lambda = 0.0;   // jump intensity, jumps per year
    double mu_j = 0.0;     // mean jump size
    double sigma_j = 0.0;  // jump size standard deviation

    void validate() const;
};

/// Stochastic-volatility model parameters. kappa/theta/sigma drive the
/// mean-reverting variants; omega32 is the 3/2 model's reversion speed;
/// jump and zeta apply to the jump-extended variants only.
struct SvParams {
    SvTag variant = SvTag::Heston;
    double kappa = 0.0;    // mean-reversion rate, 1/years
    double theta = 0.0;    // long-run variance level
    double sigma = 0.0;    // vol-of-vol (variant-specific units)
    double omega32 = 0.0;  // 3/2 reversion speed, 1/years
    std::optional<JumpParams> jump;  // GarchJump and Bates only
    double zeta = 1.0;     // jump multiplier

    /// 2*kappa*theta > sigma^2. Meaningful for Heston and Bates; recorded
    /// and warned on, never fatal.
    bool feller_satisfied() const { return 2.0 * kappa * theta > sigma * sigma; }

    void validate() const;
};

/// Stochastic-correlation model parameters. The bounded variants keep the
/// process inside their admissible interval through the diffusion shape.
struct ScParams {
    ScTag variant = ScTag::WrightFisher;
    double kappa = 0.0;    // mean-reversion rate
    double rho_bar = 0.0;  // long-run mean correlation
    double sigma = 0.0;    // correlation volatility
    double h = 1.0;        // Jacobi upper bound
    double f = -1.0;       // Jacobi lower bound
    double alpha = 1.0;    // Weibull reversion speed
    double lambda_w = 1.0; // Weibull scale
    double k_w = 1.0;      // Weibull shape
    std::optional<double> rho_const;  // Constant variant: fixed level (else market rho0)
    bool weibull_sqrt_diffusion = false;  // use sqrt(b1*b2) instead of the literal product

    /// Derived Weibull mean lambda_w * Gamma(1 + 1/k_w); computed, not stored.
    double weibull_mean_level() const;

    void validate() const;

    static ScParams constant(double rho);
};

/// Stochastic-exchange-rate model parameters. r_f/r_d enter the drift of
/// every variant; theta_ou/mu_ou apply to the OU variant and jump to ExpLevy.
struct SerParams {
    SerTag variant = SerTag::Gbm;
    double sigma_fx = 0.0;  // FX volatility, 1/sqrt(years)
    double theta_ou = 0.0;  // OU reversion rate, 1/years
    double mu_ou = 0.0;     // OU reversion level, FX units
    std::optional<JumpParams> jump;  // ExpLevy: (lambda_L, mu_L, sigma_L)
    double r_f = 0.0;       // foreign risk-free rate
    double r_d = 0.0;       // domestic risk-free rate

    void validate() const;
};

/// Closed admissible interval for a process state.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const {
        if (x < lo) return lo;
        if (x > hi) return hi;
        return x;
    }
};

/// One SDE expressed as drift m, diffusion s, the analytic state derivative
/// s' needed by the Milstein scheme, and the jump coefficient c, each a pure
/// function of (state, time). Immutable after construction and safe to share
/// across concurrent path workers.
struct CoefficientSet {
    std::function<double(double, double)> m;
    std::function<double(double, double)> s;
    std::function<double(double, double)> s_prime;
    std::function<double(double, double)> c;
    Interval domain;
};

CoefficientSet sv_coefficients(const SvParams& p);
CoefficientSet sc_coefficients(const ScParams& p);
CoefficientSet ser_coefficients(const SerParams& p);

/// Asset price SDE dS = S (r dt + sqrt(v) dW). The variance is an exogenous
/// input refreshed by the caller each step from the simulated variance path.
CoefficientSet asset_coefficients(double rate, double variance);

/// One SV choice (shared by all assets), one SC choice per correlated pair,
/// one SER choice per rate. The EUR-pair overrides default to the shared
/// values; they exist so Case 2 correlation bumps can target a single pair.
struct ModelSpec {
    SvParams sv;
    ScParams sc;
    std::optional<ScParams> sc_eur;   // EUR/USD pair override (defaults to sc)
    SerParams ser;                    // USD per GBP rate
    std::optional<SerParams> ser_eur; // USD per EUR rate (required for Case 2)

    void validate() const;
};

}  // namespace qmc
