#include "quantomc/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "quantomc/errors.hpp"
#include "quantomc/stats.hpp"

namespace qmc {

double payoff_case1(double s_usd, double s_gbp, double fx, double k1, double k2) {
    return std::max({s_usd - k1, s_gbp * fx - k2, 0.0});
}

double payoff_case2(double s_usd, double s_gbp, double s_eur, double fx_gbp, double fx_eur,
                    double k1, double k2, double k3) {
    return std::max({s_usd - k1, s_gbp * fx_gbp - k2, s_eur * fx_eur - k3, 0.0});
}

std::vector<double> path_payoffs(const TerminalSample& sample, const MarketSnapshot& mkt) {
    const std::size_t n = sample.size();
    std::vector<double> out(n);
    if (mkt.case_tag == CaseTag::Case1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = payoff_case1(sample.s_usd[i], sample.s_gbp[i], sample.fx_gbp[i], mkt.k1,
                                  mkt.k2);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = payoff_case2(sample.s_usd[i], sample.s_gbp[i], sample.s_eur[i],
                                  sample.fx_gbp[i], sample.fx_eur[i], mkt.k1, mkt.k2, *mkt.k3);
        }
    }
    return out;
}

namespace {

PriceReport from_stats(const RunningStats& stats) {
    PriceReport rep;
    rep.n_effective = stats.count();
    rep.price = stats.mean();
    rep.payoff_stdev = stats.sample_stdev();
    rep.std_error = rep.payoff_stdev / std::sqrt(static_cast<double>(stats.count()));
    rep.ci_low = rep.price - kCiZStar * rep.std_error;
    rep.ci_high = rep.price + kCiZStar * rep.std_error;
    return rep;
}

}  // namespace

PriceReport price(const TerminalSample& sample, const MarketSnapshot& mkt, const SimConfig& cfg) {
    if (sample.size() == 0) throw DataError("price: empty terminal sample");
    const double disc = std::exp(-mkt.r_d * cfg.horizon_years);
    RunningStats stats;
    for (double p : path_payoffs(sample, mkt)) stats.add(disc * p);
    return from_stats(stats);
}

PriceReport price_antithetic(const PairedTerminalSample& sample, const MarketSnapshot& mkt,
                             const SimConfig& cfg) {
    const std::size_t n = sample.original.size();
    if (n == 0) throw DataError("price_antithetic: empty terminal sample");
    if (sample.antithetic.size() != n) {
        throw DataError("price_antithetic: original and antithetic samples are misaligned");
    }
    const double disc = std::exp(-mkt.r_d * cfg.horizon_years);
    const std::vector<double> pay = path_payoffs(sample.original, mkt);
    const std::vector<double> pay_twin = path_payoffs(sample.antithetic, mkt);
    RunningStats stats;
    RunningCovariance cov;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = disc * pay[i];
        const double b = disc * pay_twin[i];
        stats.add(0.5 * (a + b));
        cov.add(a, b);
    }
    PriceReport rep = from_stats(stats);
    rep.pair_covariance = cov.sample_covariance();
    return rep;
}

PriceReport price_model(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    PriceReport rep;
    if (cfg.antithetic) {
        rep = price_antithetic(simulate_antithetic(model, mkt, cfg), mkt, cfg);
    } else {
        rep = price(simulate(model, mkt, cfg), mkt, cfg);
    }
    rep.elapsed_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string price_csv_header() {
    return "variant_id,sv,sc,ser,scheme,price,stderr,ci_low,ci_high,elapsed_s,status";
}

std::string price_csv_row(const std::string& variant_id, const std::string& sv,
                          const std::string& sc, const std::string& ser,
                          const std::string& scheme, const PriceReport& report,
                          const std::string& status) {
    char buf[256];
    std::string row = variant_id + "," + sv + "," + sc + "," + ser + "," + scheme;
    if (status == "ok") {
        std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,%.10g,%.10g,%.3f,", report.price,
                      report.std_error, report.ci_low, report.ci_high, report.elapsed_seconds);
        row += buf;
    } else {
        std::snprintf(buf, sizeof(buf), ",,,,,%.3f,", report.elapsed_seconds);
        row += buf;
    }
    row += status;
    return row;
}

}  // namespace qmc
