#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "quantomc/models.hpp"
#include "quantomc/schemes.hpp"

namespace qmc {

enum class CaseTag { Case1, Case2 };

std::string to_string(CaseTag tag);
CaseTag parse_case_tag(const std::string& name);

/// Initial market state for one option case. Case 1 carries exactly two
/// assets, one FX rate, and two strikes; Case 2 exactly three, two, three.
/// FX quotes are domestic currency per one unit of foreign currency.
struct MarketSnapshot {
    CaseTag case_tag = CaseTag::Case1;
    double s0_usd = 0.0;
    double s0_gbp = 0.0;
    std::optional<double> s0_eur;
    double fx0_gbp = 0.0;            // USD per GBP
    std::optional<double> fx0_eur;   // USD per EUR
    double v0_usd = 0.0;
    double v0_gbp = 0.0;
    std::optional<double> v0_eur;
    double rho0 = 0.0;               // initial correlation, GBP/USD pair
    std::optional<double> rho0_eur;  // EUR/USD pair override (defaults to rho0)
    double r_d = 0.0;
    double r_f1 = 0.0;
    std::optional<double> r_f2;
    double k1 = 0.0;
    double k2 = 0.0;
    std::optional<double> k3;

    void validate() const;
};

struct SimConfig {
    std::size_t n_paths = 500'000;
    double horizon_years = 1.0;
    std::size_t n_steps = 0;  // 0 resolves to horizon_years * 252, rounded
    std::uint64_t seed = 1;
    SchemeChoice scheme = SchemeChoice::Euler;
    bool antithetic = false;
    unsigned workers = 1;  // 0 resolves to the hardware thread count

    std::size_t steps() const;
    double dt() const { return horizon_years / static_cast<double>(steps()); }
    unsigned worker_count() const;

    void validate() const;
};

/// Per-path terminal values. EUR columns are empty for Case 1.
struct TerminalSample {
    std::vector<double> s_usd;
    std::vector<double> s_gbp;
    std::vector<double> s_eur;
    std::vector<double> fx_gbp;
    std::vector<double> fx_eur;

    std::size_t size() const { return s_usd.size(); }
};

/// Pairwise-aligned original and antithetic samples: row i of `antithetic`
/// used the negation of row i's Gaussian draws and the identical jumps.
struct PairedTerminalSample {
    TerminalSample original;
    TerminalSample antithetic;
};

/// Runs the per-step procedure for every path: draw increments, advance the
/// variance processes, the correlation process(es), the FX rate(s), then the
/// assets by Euler with correlation-mixed increments. States are clamped to
/// their domains after every sub-step; assets consume start-of-step variance
/// and correlation values.
TerminalSample simulate(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg);

/// N/2 original paths plus their N/2 antithetic twins (Gaussian draws
/// negated, jumps shared), returned pairwise aligned.
PairedTerminalSample simulate_antithetic(const ModelSpec& model, const MarketSnapshot& mkt,
                                         const SimConfig& cfg);

/// Writes one CSV row per (path, step) with every process value for the
/// first `max_paths` paths; header row names the processes.
void dump_paths_csv(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                    std::ostream& out, std::size_t max_paths = 100);

}  // namespace qmc
