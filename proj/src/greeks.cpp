#include "quantomc/greeks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "quantomc/errors.hpp"
#include "quantomc/special_functions.hpp"
#include "quantomc/stats.hpp"

namespace qmc {

std::string to_string(BumpMode mode) {
    return mode == BumpMode::InitialOnly ? "initial_only" : "parallel_shift";
}

std::string to_string(CorrPair pair) { return pair == CorrPair::GbpUsd ? "gbp_usd" : "eur_usd"; }

BumpMode parse_bump_mode(const std::string& name) {
    if (name == "initial_only") return BumpMode::InitialOnly;
    if (name == "parallel_shift") return BumpMode::ParallelShift;
    throw ConfigError("unknown bump mode '" + name +
                      "'; valid modes: initial_only, parallel_shift");
}

CorrPair parse_corr_pair(const std::string& name) {
    if (name == "gbp_usd") return CorrPair::GbpUsd;
    if (name == "eur_usd") return CorrPair::EurUsd;
    throw ConfigError("unknown correlation pair '" + name + "'; valid pairs: gbp_usd, eur_usd");
}

namespace {

void shift_sc_mean(ScParams& sc, double delta) {
    switch (sc.variant) {
        case ScTag::WrightFisher:
        case ScTag::Jacobi:
        case ScTag::MeanReverting:
            sc.rho_bar += delta;
            break;
        case ScTag::Weibull:
            // The Weibull mean is lambda * Gamma(1 + 1/k), linear in lambda.
            sc.lambda_w += delta / std::tgamma(1.0 + 1.0 / sc.k_w);
            break;
        case ScTag::Constant:
            if (sc.rho_const) *sc.rho_const += delta;
            break;
    }
}

struct Leg {
    std::vector<double> payoffs;  // discounted, per path (or per antithetic pair)
    PriceReport report;
};

Leg run_leg(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    Leg leg;
    const double disc = std::exp(-mkt.r_d * cfg.horizon_years);
    RunningStats stats;
    if (cfg.antithetic) {
        const PairedTerminalSample sample = simulate_antithetic(model, mkt, cfg);
        const std::vector<double> pay = path_payoffs(sample.original, mkt);
        const std::vector<double> twin = path_payoffs(sample.antithetic, mkt);
        leg.payoffs.resize(pay.size());
        RunningCovariance cov;
        for (std::size_t i = 0; i < pay.size(); ++i) {
            leg.payoffs[i] = disc * 0.5 * (pay[i] + twin[i]);
            stats.add(leg.payoffs[i]);
            cov.add(disc * pay[i], disc * twin[i]);
        }
        leg.report.pair_covariance = cov.sample_covariance();
    } else {
        const TerminalSample sample = simulate(model, mkt, cfg);
        leg.payoffs = path_payoffs(sample, mkt);
        for (double& p : leg.payoffs) {
            p *= disc;
            stats.add(p);
        }
    }
    leg.report.n_effective = stats.count();
    leg.report.price = stats.mean();
    leg.report.payoff_stdev = stats.sample_stdev();
    leg.report.std_error = leg.report.payoff_stdev / std::sqrt(static_cast<double>(stats.count()));
    leg.report.ci_low = leg.report.price - kCiZStar * leg.report.std_error;
    leg.report.ci_high = leg.report.price + kCiZStar * leg.report.std_error;
    leg.report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return leg;
}

GreekReport run_three_legs(const ModelSpec& model, const MarketSnapshot& mkt,
                           const SimConfig& cfg, double h, BumpMode mode, CorrPair pair) {
    // Common random numbers: the counter-based streams make every leg with
    // the same seed consume the identical increment tensor.
    const BumpedInputs up_in = apply_corr_bump(model, mkt, +h, mode, pair);
    const BumpedInputs dn_in = apply_corr_bump(model, mkt, -h, mode, pair);
    const BumpedInputs base_in = apply_corr_bump(model, mkt, 0.0, mode, pair);

    const Leg up = run_leg(up_in.model, up_in.market, cfg);
    const Leg base = run_leg(base_in.model, base_in.market, cfg);
    const Leg down = run_leg(dn_in.model, dn_in.market, cfg);

    GreekReport rep;
    rep.h_used = h;
    rep.mode = mode;
    rep.pair = pair;
    rep.base = base.report;
    rep.up = up.report;
    rep.down = down.report;

    RunningStats first, second;
    const std::size_t n = base.payoffs.size();
    for (std::size_t i = 0; i < n; ++i) {
        first.add((up.payoffs[i] - down.payoffs[i]) / (2.0 * h));
        second.add((up.payoffs[i] - 2.0 * base.payoffs[i] + down.payoffs[i]) / (h * h));
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    rep.cora = first.mean();
    rep.cora_se = first.sample_stdev() / root_n;
    rep.gora = second.mean();
    rep.gora_se = second.sample_stdev() / root_n;
    return rep;
}

}  // namespace

BumpedInputs apply_corr_bump(const ModelSpec& model, const MarketSnapshot& mkt, double delta,
                             BumpMode mode, CorrPair pair) {
    BumpedInputs out{model, mkt};
    if (pair == CorrPair::EurUsd && mkt.case_tag != CaseTag::Case2) {
        throw ConfigError("the eur_usd correlation pair exists only for case2");
    }
    if (mkt.case_tag == CaseTag::Case2) {
        // Pin the untouched pair at its base values before shifting anything.
        if (!out.model.sc_eur) out.model.sc_eur = model.sc;
        if (!out.market.rho0_eur) out.market.rho0_eur = mkt.rho0;
    }
    if (pair == CorrPair::GbpUsd) {
        out.market.rho0 += delta;
        if (mode == BumpMode::ParallelShift) shift_sc_mean(out.model.sc, delta);
    } else {
        *out.market.rho0_eur += delta;
        if (mode == BumpMode::ParallelShift) shift_sc_mean(*out.model.sc_eur, delta);
    }
    return out;
}

GreekReport corr_greeks(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                        const CorrBumpSpec& bump) {
    if (!(bump.h > 0.0)) throw InvalidParameterError("correlation bump h must be > 0");
    const ScParams& sc =
        (bump.pair == CorrPair::EurUsd && model.sc_eur) ? *model.sc_eur : model.sc;
    const Interval domain = sc_coefficients(sc).domain;
    const double rho0 = bump.pair == CorrPair::EurUsd && mkt.rho0_eur ? *mkt.rho0_eur : mkt.rho0;

    auto fits = [&](double h) { return domain.contains(rho0 + h) && domain.contains(rho0 - h); };
    if (!fits(bump.h)) {
        throw DomainSaturationError("correlation bump does not fit: rho0 = " +
                                    std::to_string(rho0) + ", h = " + std::to_string(bump.h) +
                                    ", domain = [" + std::to_string(domain.lo) + ", " +
                                    std::to_string(domain.hi) + "]");
    }

    GreekReport rep = run_three_legs(model, mkt, cfg, bump.h, bump.mode, bump.pair);
    // Noise-dominated regime: widen once and retry.
    if (rep.cora_se > std::fabs(rep.cora) && bump.h < 0.02 && fits(0.02)) {
        rep = run_three_legs(model, mkt, cfg, 0.02, bump.mode, bump.pair);
    }
    return rep;
}

GreekReport cora(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                 const CorrBumpSpec& bump) {
    return corr_greeks(model, mkt, cfg, bump);
}

GreekReport gora(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                 const CorrBumpSpec& bump) {
    return corr_greeks(model, mkt, cfg, bump);
}

std::string greeks_csv_header() {
    return "variant_id,pair,h,mode,cora,cora_se,gora,gora_se";
}

std::string greeks_csv_row(const std::string& variant_id, const GreekReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), ",%s,%.10g,%s,%.10g,%.10g,%.10g,%.10g",
                  to_string(report.pair).c_str(), report.h_used, to_string(report.mode).c_str(),
                  report.cora, report.cora_se, report.gora, report.gora_se);
    return variant_id + buf;
}

}  // namespace qmc
