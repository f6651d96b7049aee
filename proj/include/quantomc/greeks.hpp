#pragma once

#include <string>

#include "quantomc/pricing.hpp"

namespace qmc {

/// Which correlation level(s) a bump shifts. Mean-reverting SC models pull a
/// bumped starting value back at rate kappa, so ParallelShift (rho0 and the
/// long-run mean together) is the default.
enum class BumpMode { InitialOnly, ParallelShift };

enum class CorrPair { GbpUsd, EurUsd };

std::string to_string(BumpMode mode);
std::string to_string(CorrPair pair);
BumpMode parse_bump_mode(const std::string& name);
CorrPair parse_corr_pair(const std::string& name);

struct CorrBumpSpec {
    double h = 0.01;  // bump size, correlation units
    BumpMode mode = BumpMode::ParallelShift;
    CorrPair pair = CorrPair::GbpUsd;
};

/// Correlation sensitivities from three common-random-number legs at
/// rho - h, rho, rho + h. Standard errors come from the per-path finite
/// differences, which is what common random numbers make tight.
struct GreekReport {
    double cora = 0.0;     // currency per unit correlation
    double cora_se = 0.0;
    double gora = 0.0;     // currency per unit correlation squared
    double gora_se = 0.0;
    double h_used = 0.0;
    BumpMode mode = BumpMode::ParallelShift;
    CorrPair pair = CorrPair::GbpUsd;
    PriceReport base;
    PriceReport up;
    PriceReport down;
};

/// Returns copies of (model, market) with the correlation inputs of the
/// target pair shifted by delta. The untouched pair keeps its base values.
struct BumpedInputs {
    ModelSpec model;
    MarketSnapshot market;
};
BumpedInputs apply_corr_bump(const ModelSpec& model, const MarketSnapshot& mkt, double delta,
                             BumpMode mode, CorrPair pair);

/// Central-difference Cora and Gora under common random numbers. Reuses the
/// configured seed for all three legs; widens h to 0.02 once if the cora
/// estimate is noise-dominated. Throws DomainSaturationError when rho0 +- h
/// cannot both fit inside the SC model's domain.
GreekReport corr_greeks(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                        const CorrBumpSpec& bump = {});

/// [C(rho+h) - C(rho-h)] / (2h); full report, cora fields populated.
GreekReport cora(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                 const CorrBumpSpec& bump = {});

/// [C(rho+h) - 2 C(rho) + C(rho-h)] / h^2; full report, gora fields populated.
GreekReport gora(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                 const CorrBumpSpec& bump = {});

std::string greeks_csv_header();
std::string greeks_csv_row(const std::string& variant_id, const GreekReport& report);

}  // namespace qmc
