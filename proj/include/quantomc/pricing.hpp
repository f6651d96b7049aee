#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quantomc/engine.hpp"

namespace qmc {

/// z* multiplier for the reported 95% confidence interval.
inline constexpr double kCiZStar = 1.96;

/// Discounted Monte Carlo estimate with its dispersion statistics.
struct PriceReport {
    double price = 0.0;
    double std_error = 0.0;  // stdev of discounted payoff / sqrt(n_effective)
    double ci_low = 0.0;
    double ci_high = 0.0;
    double payoff_stdev = 0.0;  // stdev of the discounted payoff sample
    std::size_t n_effective = 0;
    double elapsed_seconds = 0.0;
    /// Antithetic runs only: realized covariance between the discounted
    /// payoffs of paired original and antithetic paths.
    std::optional<double> pair_covariance;
};

double payoff_case1(double s_usd, double s_gbp, double fx, double k1, double k2);
double payoff_case2(double s_usd, double s_gbp, double s_eur, double fx_gbp, double fx_eur,
                    double k1, double k2, double k3);

/// Undiscounted payoff per path.
std::vector<double> path_payoffs(const TerminalSample& sample, const MarketSnapshot& mkt);

PriceReport price(const TerminalSample& sample, const MarketSnapshot& mkt, const SimConfig& cfg);

/// Estimator over the N/2 combined pair payoffs (Payoff_i + Payoff'_i) / 2.
PriceReport price_antithetic(const PairedTerminalSample& sample, const MarketSnapshot& mkt,
                             const SimConfig& cfg);

/// simulate (or simulate_antithetic) followed by the matching estimator,
/// with wall-clock time stamped into the report.
PriceReport price_model(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg);

std::string price_csv_header();
std::string price_csv_row(const std::string& variant_id, const std::string& sv,
                          const std::string& sc, const std::string& ser,
                          const std::string& scheme, const PriceReport& report,
                          const std::string& status);

}  // namespace qmc
