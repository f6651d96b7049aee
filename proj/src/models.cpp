#include "quantomc/models.hpp"

#include <cmath>
#include <limits>

#include "quantomc/errors.hpp"
#include "quantomc/special_functions.hpp"

namespace qmc {

namespace {

// Floor applied before singular derivative evaluations and inside the
// Weibull density; keeps the v = 0 and |rho| = 1 limits finite.
constexpr double kEpsState = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sqrt_pos(double x) { return std::sqrt(x > 0.0 ? x : 0.0); }

const std::function<double(double, double)> kZero = [](double, double) { return 0.0; };

void require(bool ok, const char* message) {
    if (!ok) throw InvalidParameterError(message);
}

}  // namespace

std::string to_string(SvTag tag) {
    switch (tag) {
        case SvTag::Heston: return "heston";
        case SvTag::Garch: return "garch";
        case SvTag::GarchJump: return "garch_jump";
        case SvTag::Bates: return "bates";
        case SvTag::ThreeHalves: return "three_halves";
    }
    return "?";
}

std::string to_string(ScTag tag) {
    switch (tag) {
        case ScTag::WrightFisher: return "wright_fisher";
        case ScTag::Jacobi: return "jacobi";
        case ScTag::MeanReverting: return "mean_reverting";
        case ScTag::Weibull: return "weibull";
        case ScTag::Constant: return "constant";
    }
    return "?";
}

std::string to_string(SerTag tag) {
    switch (tag) {
        case SerTag::Gbm: return "gbm";
        case SerTag::Ou: return "ou";
        case SerTag::ExpLevy: return "exp_levy";
    }
    return "?";
}

SvTag parse_sv_tag(const std::string& name) {
    if (name == "heston") return SvTag::Heston;
    if (name == "garch") return SvTag::Garch;
    if (name == "garch_jump") return SvTag::GarchJump;
    if (name == "bates") return SvTag::Bates;
    if (name == "three_halves") return SvTag::ThreeHalves;
    throw ConfigError("unknown sv tag '" + name +
                      "'; valid tags: heston, garch, garch_jump, bates, three_halves");
}

ScTag parse_sc_tag(const std::string& name) {
    if (name == "wright_fisher") return ScTag::WrightFisher;
    if (name == "jacobi") return ScTag::Jacobi;
    if (name == "mean_reverting") return ScTag::MeanReverting;
    if (name == "weibull") return ScTag::Weibull;
    if (name == "constant") return ScTag::Constant;
    throw ConfigError("unknown sc tag '" + name +
                      "'; valid tags: wright_fisher, jacobi, mean_reverting, weibull, constant");
}

SerTag parse_ser_tag(const std::string& name) {
    if (name == "gbm") return SerTag::Gbm;
    if (name == "ou") return SerTag::Ou;
    if (name == "exp_levy") return SerTag::ExpLevy;
    throw ConfigError("unknown ser tag '" + name + "'; valid tags: gbm, ou, exp_levy");
}

void JumpParams::validate() const {
    require(std::isfinite(lambda) && lambda >= 0.0, "jump lambda must be >= 0");
    require(std::isfinite(mu_j), "jump mu_j must be finite");
    require(std::isfinite(sigma_j) && sigma_j >= 0.0, "jump sigma_j must be >= 0");
}

void SvParams::validate() const {
    require(std::isfinite(kappa) && kappa > 0.0, "sv kappa must be > 0");
    require(std::isfinite(theta) && theta > 0.0, "sv theta must be > 0");
    // sigma == 0 is allowed so volatility can be frozen in validation runs.
    require(std::isfinite(sigma) && sigma >= 0.0, "sv sigma must be >= 0");
    require(std::isfinite(zeta), "sv zeta must be finite");
    if (variant == SvTag::ThreeHalves) {
        require(std::isfinite(omega32) && omega32 > 0.0, "sv omega32 must be > 0 for three_halves");
    }
    const bool wants_jump = variant == SvTag::GarchJump || variant == SvTag::Bates;
    if (wants_jump) {
        require(jump.has_value(), "sv jump parameters required for garch_jump and bates");
        jump->validate();
    }
}

double ScParams::weibull_mean_level() const { return weibull_mean(lambda_w, k_w); }

void ScParams::validate() const {
    require(std::isfinite(rho_bar) && rho_bar >= -1.0 && rho_bar <= 1.0,
            "sc rho_bar must lie in [-1, 1]");
    switch (variant) {
        case ScTag::WrightFisher:
        case ScTag::MeanReverting:
            require(std::isfinite(kappa) && kappa > 0.0, "sc kappa must be > 0");
            require(std::isfinite(sigma) && sigma >= 0.0, "sc sigma must be >= 0");
            break;
        case ScTag::Jacobi:
            require(std::isfinite(kappa) && kappa > 0.0, "sc kappa must be > 0");
            require(std::isfinite(sigma) && sigma >= 0.0, "sc sigma must be >= 0");
            require(f >= -1.0 && h <= 1.0 && f < h, "jacobi bounds require -1 <= f < h <= 1");
            require(f < rho_bar && rho_bar < h, "jacobi requires f < rho_bar < h");
            break;
        case ScTag::Weibull:
            require(std::isfinite(alpha) && alpha > 0.0, "weibull alpha must be > 0");
            require(std::isfinite(lambda_w) && lambda_w > 0.0, "weibull lambda must be > 0");
            require(std::isfinite(k_w) && k_w > 0.0, "weibull k must be > 0");
            break;
        case ScTag::Constant:
            if (rho_const) {
                require(std::isfinite(*rho_const) && *rho_const >= -1.0 && *rho_const <= 1.0,
                        "sc rho_const must lie in [-1, 1]");
            }
            break;
    }
}

ScParams ScParams::constant(double rho) {
    ScParams p;
    p.variant = ScTag::Constant;
    p.rho_const = rho;
    p.rho_bar = rho;
    return p;
}

void SerParams::validate() const {
    // sigma_fx == 0 is allowed so the rate can be frozen in validation runs.
    require(std::isfinite(sigma_fx) && sigma_fx >= 0.0, "ser sigma_fx must be >= 0");
    require(std::isfinite(r_f) && std::isfinite(r_d), "ser rates must be finite");
    if (variant == SerTag::Ou) {
        require(std::isfinite(theta_ou) && theta_ou >= 0.0, "ou theta must be >= 0");
        require(std::isfinite(mu_ou) && mu_ou > 0.0, "ou mu must be > 0");
    }
    if (variant == SerTag::ExpLevy) {
        require(jump.has_value(), "exp_levy requires jump parameters");
        jump->validate();
    }
}

void ModelSpec::validate() const {
    sv.validate();
    sc.validate();
    if (sc_eur) sc_eur->validate();
    ser.validate();
    if (ser_eur) ser_eur->validate();
}

CoefficientSet sv_coefficients(const SvParams& p) {
    p.validate();
    CoefficientSet cs;
    cs.domain = {0.0, kInf};
    cs.c = kZero;
    const double kappa = p.kappa;
    const double theta = p.theta;
    const double sigma = p.sigma;
    switch (p.variant) {
        case SvTag::Heston:
        case SvTag::Bates:
            cs.m = [kappa, theta](double v, double) { return kappa * (theta - v); };
            cs.s = [sigma](double v, double) { return sigma * sqrt_pos(v); };
            cs.s_prime = [sigma](double v, double) {
                return sigma / (2.0 * std::sqrt(std::max(v, kEpsState)));
            };
            break;
        case SvTag::Garch:
        case SvTag::GarchJump:
            cs.m = [kappa, theta](double v, double) { return kappa * (theta - v); };
            cs.s = [sigma](double v, double) { return sigma * v; };
            cs.s_prime = [sigma](double, double) { return sigma; };
            break;
        case SvTag::ThreeHalves: {
            const double omega = p.omega32;
            cs.m = [omega, theta](double v, double) { return (omega - theta * v) * v; };
            cs.s = [sigma](double v, double) { return sigma * std::pow(std::max(v, 0.0), 1.5); };
            cs.s_prime = [sigma](double v, double) {
                return 1.5 * sigma * std::sqrt(std::max(v, kEpsState));
            };
            break;
        }
    }
    if (p.variant == SvTag::GarchJump || p.variant == SvTag::Bates) {
        const double zeta = p.zeta;
        cs.c = [zeta](double, double) { return zeta; };
    }
    return cs;
}

CoefficientSet sc_coefficients(const ScParams& p) {
    p.validate();
    CoefficientSet cs;
    cs.c = kZero;
    const double kappa = p.kappa;
    const double rho_bar = p.rho_bar;
    const double sigma = p.sigma;
    switch (p.variant) {
        case ScTag::WrightFisher:
            cs.domain = {-1.0, 1.0};
            cs.m = [kappa, rho_bar](double rho, double) { return kappa * (rho_bar - rho); };
            cs.s = [sigma](double rho, double) { return sigma * sqrt_pos(1.0 - rho * rho); };
            cs.s_prime = [sigma](double rho, double) {
                return -sigma * rho / std::sqrt(std::max(1.0 - rho * rho, kEpsState));
            };
            break;
        case ScTag::MeanReverting:
            cs.domain = {-1.0, 1.0};
            cs.m = [kappa, rho_bar, sigma](double rho, double) {
                return kappa * (rho_bar - rho) - sigma * sigma * rho;
            };
            cs.s = [sigma](double rho, double) { return sigma * sqrt_pos(1.0 - rho * rho); };
            cs.s_prime = [sigma](double rho, double) {
                return -sigma * rho / std::sqrt(std::max(1.0 - rho * rho, kEpsState));
            };
            break;
        case ScTag::Jacobi: {
            const double h = p.h;
            const double f = p.f;
            cs.domain = {f, h};
            cs.m = [kappa, rho_bar](double rho, double) { return kappa * (rho_bar - rho); };
            cs.s = [sigma, h, f](double rho, double) {
                return sigma * sqrt_pos((h - rho) * (rho - f));
            };
            cs.s_prime = [sigma, h, f](double rho, double) {
                const double q = std::max((h - rho) * (rho - f), kEpsState);
                return sigma * (h + f - 2.0 * rho) / (2.0 * std::sqrt(q));
            };
            break;
        }
        case ScTag::Weibull: {
            cs.domain = {0.0, 1.0};
            const double alpha = p.alpha;
            const double lambda = p.lambda_w;
            const double k = p.k_w;
            const double mu_w = p.weibull_mean_level();
            const bool sqrt_form = p.weibull_sqrt_diffusion;
            cs.m = [alpha, mu_w](double rho, double) { return -alpha * (rho - mu_w); };
            auto diffusion = [alpha, lambda, k, mu_w, sqrt_form](double rho, double) {
                const double r = std::max(rho, kEpsState);
                const double x = std::pow(r / lambda, k);
                const double b1 = 2.0 * alpha / weibull_pdf(r, lambda, k);
                const double b2 =
                    lambda * upper_incomplete_gamma(1.0 + 1.0 / k, x) - mu_w * std::exp(-x);
                const double prod = b1 * b2;
                return sqrt_form ? std::sqrt(std::max(prod, 0.0)) : prod;
            };
            cs.s = diffusion;
            // No tractable closed form; central difference per the diffusion itself.
            cs.s_prime = [diffusion](double rho, double t) {
                const double step = 1e-6;
                const double up = std::min(rho + step, 1.0);
                const double dn = std::max(rho - step, 0.0);
                return (diffusion(up, t) - diffusion(dn, t)) / (up - dn);
            };
            break;
        }
        case ScTag::Constant:
            cs.domain = {-1.0, 1.0};
            cs.m = kZero;
            cs.s = kZero;
            cs.s_prime = kZero;
            break;
    }
    return cs;
}

CoefficientSet ser_coefficients(const SerParams& p) {
    p.validate();
    CoefficientSet cs;
    cs.domain = {0.0, kInf};
    cs.c = kZero;
    const double sigma = p.sigma_fx;
    const double drift_rate = p.r_f - p.r_d - 0.5 * sigma * sigma;
    switch (p.variant) {
        case SerTag::Gbm:
            cs.m = [drift_rate](double fx, double) { return fx * drift_rate; };
            break;
        case SerTag::Ou: {
            const double theta = p.theta_ou;
            const double mu = p.mu_ou;
            cs.m = [theta, mu, drift_rate](double fx, double) {
                return theta * (mu - fx) + fx * drift_rate;
            };
            break;
        }
        case SerTag::ExpLevy:
            cs.m = [drift_rate](double fx, double) { return fx * drift_rate; };
            // Jump increments enter additively, so the coefficient is 1.
            cs.c = [](double, double) { return 1.0; };
            break;
    }
    cs.s = [sigma](double fx, double) { return sigma * fx; };
    cs.s_prime = [sigma](double, double) { return sigma; };
    return cs;
}

CoefficientSet asset_coefficients(double rate, double variance) {
    CoefficientSet cs;
    cs.domain = {0.0, kInf};
    cs.c = kZero;
    const double vol = sqrt_pos(variance);
    cs.m = [rate](double s, double) { return s * rate; };
    cs.s = [vol](double s, double) { return s * vol; };
    cs.s_prime = [vol](double, double) { return vol; };
    return cs;
}

}  // namespace qmc
