#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "quantomc/engine.hpp"

namespace qmc {

/// Daily close series for one instrument. Dates are ISO-8601 strings, which
/// order lexicographically; strictly increasing with no duplicates.
struct HistorySeries {
    std::string instrument;
    std::vector<std::string> dates;
    std::vector<double> closes;
    bool was_unsorted = false;     // input rows arrived out of order
    std::size_t dropped_rows = 0;  // rows skipped for missing closes

    std::size_t size() const { return dates.size(); }
};

struct CalibrationWindow {
    std::string as_of;          // option start date; no later data is used
    std::size_t lookback = 252; // trading days feeding the long-run statistics
    std::size_t rolling = 30;   // rolling-statistic window, trading days
};

/// Interest rates are config constants, never estimated.
struct RateConstants {
    double r_d = 0.0;
    double r_f1 = 0.0;
    std::optional<double> r_f2;
};

/// A rolling statistic aligned to the date its trailing window ends on.
struct RollingSeries {
    std::vector<std::string> dates;
    std::vector<double> values;

    std::size_t size() const { return dates.size(); }
};

/// Parses a `date,close` CSV (ISO-8601 dates). Rows with missing closes are
/// dropped and counted; unsorted input is sorted and flagged; duplicate
/// dates are rejected.
HistorySeries ingest_csv(const std::string& path);

std::vector<double> log_returns(const HistorySeries& series);

/// Annualized rolling volatility: population stdev of log-returns over each
/// trailing window, times sqrt(252).
RollingSeries rolling_volatility(const HistorySeries& series, std::size_t window);

/// Rolling Pearson correlation of log-returns over trailing windows. The two
/// series must cover identical dates.
RollingSeries rolling_correlation(const HistorySeries& a, const HistorySeries& b,
                                  std::size_t window);

struct MeanReversionFit {
    double rate = 0.0;   // 1/years, floored at 0 and capped at rate_max
    double level = 0.0;  // sample mean of the series
    bool rate_capped = false;
};

/// Largest mean-reversion rate the AR(1) proxy may report.
inline constexpr double kMeanReversionRateCap = 50.0;

/// OU parameters from an AR(1) proxy: level = sample mean, rate =
/// -ln(lag-1 autocorrelation) / dt.
MeanReversionFit fit_mean_reversion(std::span<const double> series, double dt);

/// Snapshot plus model defaults derived from history, with diagnostics notes
/// (capped fits, fallbacks, Feller status).
struct CalibratedInputs {
    MarketSnapshot market;
    ModelSpec model;
    std::vector<std::string> notes;
};

/// Instruments required per case, keyed "sp500", "ftse100", "gbpusd" and for
/// Case 2 additionally "stoxx600", "eurusd". Uses only observations dated at
/// or before window.as_of.
CalibratedInputs build_market_snapshot(const std::map<std::string, HistorySeries>& series,
                                       const CalibrationWindow& window, CaseTag case_tag,
                                       const RateConstants& rates);

}  // namespace qmc
