#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quantomc/pricing.hpp"

namespace qmc {

enum class SweepKind { StochasticCorr, ConstantCorr };

struct VariantId {
    SvTag sv;
    ScTag sc;
    SerTag ser;
    SchemeChoice scheme;

    std::string label() const;
    friend bool operator==(const VariantId&, const VariantId&) = default;
};

struct VariantRow {
    VariantId id;
    PriceReport report;
    std::string status = "ok";  // "ok" or a terse failure description
    double pct_error = 0.0;     // 100 * |price - target| / target
    int rank_se = 0;            // 1-based rank by estimator standard error
    int rank_pe = 0;            // 1-based rank by percentage error
    bool top30 = false;

    bool ok() const { return status == "ok"; }
};

/// All model x scheme variants priced under one seed, ranked by dispersion
/// and by percentage error against the consensus target (mean price of the
/// 40 lowest-standard-error variants).
struct VariantTable {
    SweepKind kind = SweepKind::StochasticCorr;
    std::vector<VariantRow> rows;  // enumeration order: sv, sc, ser, scheme
    double target = 0.0;
    bool degraded_target = false;  // fewer than 40 successes fed the target
};

/// Stamps one (sv, sc, ser, scheme) combination onto the calibrated base
/// spec. The SV diffusion parameter is rescaled so every variant shares the
/// base model's instantaneous diffusion at v = theta.
ModelSpec make_variant_model(const ModelSpec& base, SvTag sv, ScTag sc, SerTag ser);

/// Prices every variant of the sweep with the shared seed and path budget.
/// Per-variant failures are recorded in their rows, never propagated.
VariantTable run_sweep(const ModelSpec& base, const MarketSnapshot& mkt, const SimConfig& cfg,
                       SweepKind kind);

/// Fills ranks, the consensus target, percentage errors, and top-30 flags
/// from the rows already in the table. Ties in standard error break
/// lexicographically by (sv, sc, ser, scheme) so the 40-best pool is
/// deterministic; failed rows are excluded from the target.
void rank_and_score(VariantTable& table);

/// Wall-clock seconds consumed by one variant run.
double record_timing(const std::function<void()>& run);

struct MergedRow {
    VariantId id;
    bool constant_corr = false;
    double price = 0.0;
    double pct_error = 0.0;
};

/// Constant-correlation rows re-scored against the stochastic-correlation
/// target and inserted into its percentage-error ordering.
struct MergedReport {
    double target = 0.0;
    std::vector<MergedRow> rows;         // ascending percentage error
    std::size_t best_const_placement = 0;  // 1-based overall rank of the best constant row
};

MergedReport merge_benchmark(const VariantTable& sc_table, const VariantTable& const_table);

std::string sweep_csv(const VariantTable& table);

/// Markdown table ordered by percentage error, top-30 variants in bold,
/// with the merged benchmark placement appended when given.
std::string sweep_markdown(const VariantTable& table, const MergedReport* merged = nullptr);

}  // namespace qmc
