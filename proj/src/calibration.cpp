#include "quantomc/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "quantomc/errors.hpp"
#include "quantomc/special_functions.hpp"
#include "quantomc/stats.hpp"

namespace qmc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool valid_iso_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    }
    const int month = (d[5] - '0') * 10 + (d[6] - '0');
    const int day = (d[8] - '0') * 10 + (d[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

double population_stdev(std::span<const double> xs) {
    RunningStats stats;
    for (double x : xs) stats.add(x);
    return stats.population_stdev();
}

double mean_of(std::span<const double> xs) {
    RunningStats stats;
    for (double x : xs) stats.add(x);
    return stats.mean();
}

std::span<const double> tail(const std::vector<double>& xs, std::size_t n) {
    const std::size_t take = std::min(n, xs.size());
    return std::span<const double>(xs.data() + (xs.size() - take), take);
}

// Annualized stdev of the day-to-day changes of a rolling-statistic series.
// This is the artifact default for the volatility of SV and SC processes.
double annualized_change_stdev(std::span<const double> levels) {
    if (levels.size() < 2) return 0.0;
    RunningStats stats;
    for (std::size_t i = 1; i < levels.size(); ++i) stats.add(levels[i] - levels[i - 1]);
    return stats.population_stdev() * std::sqrt(252.0);
}

HistorySeries truncate_to(const HistorySeries& s, const std::string& as_of) {
    HistorySeries out;
    out.instrument = s.instrument;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.dates[i] <= as_of) {  // ISO dates order lexicographically
            out.dates.push_back(s.dates[i]);
            out.closes.push_back(s.closes[i]);
        }
    }
    return out;
}

// Solves Gamma(1+2/k) / Gamma(1+1/k)^2 - 1 = cv2 for the Weibull shape k by
// bisection; the left side decreases monotonically in k.
double weibull_shape_from_cv2(double cv2) {
    auto f = [](double k) {
        const double g1 = std::tgamma(1.0 + 1.0 / k);
        return std::tgamma(1.0 + 2.0 / k) / (g1 * g1) - 1.0;
    };
    double lo = 0.2, hi = 50.0;
    if (cv2 >= f(lo)) return lo;
    if (cv2 <= f(hi)) return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > cv2) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

HistorySeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV file: " + path);
    const std::vector<std::string> header = split_csv_line(line);
    std::ptrdiff_t date_col = -1, close_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = to_lower(header[i]);
        if (name == "date") date_col = static_cast<std::ptrdiff_t>(i);
        if (name == "close") close_col = static_cast<std::ptrdiff_t>(i);
    }
    if (date_col < 0 || close_col < 0) {
        throw DataError("CSV header must contain 'date' and 'close' columns: " + path);
    }

    HistorySeries series;
    series.instrument = path;
    std::vector<std::pair<std::string, double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::size_t need = static_cast<std::size_t>(std::max(date_col, close_col)) + 1;
        if (fields.size() < need) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(need) + " fields");
        }
        const std::string date = fields[static_cast<std::size_t>(date_col)];
        if (!valid_iso_date(date)) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": bad ISO date '" +
                            date + "'");
        }
        const std::string close_text = fields[static_cast<std::size_t>(close_col)];
        if (close_text.empty()) {
            ++series.dropped_rows;
            continue;
        }
        char* end = nullptr;
        const double close = std::strtod(close_text.c_str(), &end);
        if (end == close_text.c_str() || *end != '\0') {
            throw DataError(path + ": line " + std::to_string(line_no) + ": bad close '" +
                            close_text + "'");
        }
        if (!(close > 0.0)) {
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": close must be > 0, got " + close_text);
        }
        rows.emplace_back(date, close);
    }
    if (rows.empty()) throw DataError("no usable rows in CSV file: " + path);

    if (!std::is_sorted(rows.begin(), rows.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
        series.was_unsorted = true;
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw DataError(path + ": duplicate date " + rows[i].first);
        }
    }
    series.dates.reserve(rows.size());
    series.closes.reserve(rows.size());
    for (auto& [date, close] : rows) {
        series.dates.push_back(std::move(date));
        series.closes.push_back(close);
    }
    return series;
}

std::vector<double> log_returns(const HistorySeries& series) {
    if (series.size() < 2) throw DataError("log_returns: need at least 2 observations");
    std::vector<double> out(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        out[i - 1] = std::log(series.closes[i] / series.closes[i - 1]);
    }
    return out;
}

RollingSeries rolling_volatility(const HistorySeries& series, std::size_t window) {
    if (window < 2) throw InvalidParameterError("rolling_volatility: window must be >= 2");
    const std::vector<double> returns = log_returns(series);
    if (returns.size() < window) {
        throw DataError("rolling_volatility: need at least " + std::to_string(window + 1) +
                        " observations, have " + std::to_string(series.size()));
    }
    RollingSeries out;
    out.dates.reserve(returns.size() - window + 1);
    out.values.reserve(returns.size() - window + 1);
    for (std::size_t end = window; end <= returns.size(); ++end) {
        const std::span<const double> w(returns.data() + (end - window), window);
        out.values.push_back(population_stdev(w) * std::sqrt(252.0));
        out.dates.push_back(series.dates[end]);  // return i lives on date i+1
    }
    return out;
}

RollingSeries rolling_correlation(const HistorySeries& a, const HistorySeries& b,
                                  std::size_t window) {
    if (window < 3) throw InvalidParameterError("rolling_correlation: window must be >= 3");
    if (a.dates != b.dates) {
        std::string detail;
        std::size_t listed = 0;
        for (const auto& d : a.dates) {
            if (!std::binary_search(b.dates.begin(), b.dates.end(), d)) {
                detail += (listed ? ", " : "") + d;
                if (++listed == 5) break;
            }
        }
        for (const auto& d : b.dates) {
            if (listed == 5) break;
            if (!std::binary_search(a.dates.begin(), a.dates.end(), d)) {
                detail += (listed ? ", " : "") + d;
                ++listed;
            }
        }
        throw DataError("rolling_correlation: date mismatch between " + a.instrument + " and " +
                        b.instrument + (detail.empty() ? "" : "; unmatched dates: " + detail));
    }
    const std::vector<double> ra = log_returns(a);
    const std::vector<double> rb = log_returns(b);
    if (ra.size() < window) {
        throw DataError("rolling_correlation: need at least " + std::to_string(window + 1) +
                        " observations, have " + std::to_string(a.size()));
    }
    RollingSeries out;
    for (std::size_t end = window; end <= ra.size(); ++end) {
        double ma = 0.0, mb = 0.0;
        for (std::size_t i = end - window; i < end; ++i) {
            ma += ra[i];
            mb += rb[i];
        }
        ma /= static_cast<double>(window);
        mb /= static_cast<double>(window);
        double saa = 0.0, sbb = 0.0, sab = 0.0;
        for (std::size_t i = end - window; i < end; ++i) {
            const double da = ra[i] - ma;
            const double db = rb[i] - mb;
            saa += da * da;
            sbb += db * db;
            sab += da * db;
        }
        const double denom = std::sqrt(saa * sbb);
        const double corr = denom > 0.0 ? sab / denom : 0.0;
        out.values.push_back(std::clamp(corr, -1.0, 1.0));
        out.dates.push_back(a.dates[end]);
    }
    return out;
}

MeanReversionFit fit_mean_reversion(std::span<const double> series, double dt) {
    if (series.size() < 60) {
        throw DataError("fit_mean_reversion: need at least 60 observations, have " +
                        std::to_string(series.size()));
    }
    if (!(dt > 0.0)) throw InvalidParameterError("fit_mean_reversion: dt must be > 0");

    MeanReversionFit fit;
    fit.level = mean_of(series);

    double var = 0.0, acov = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series[i] - fit.level;
        var += d * d;
        if (i > 0) acov += d * (series[i - 1] - fit.level);
    }
    const double scale = std::max(1.0, fit.level * fit.level);
    if (var / static_cast<double>(series.size()) < 1e-18 * scale) {
        throw DataError("fit_mean_reversion: series variance is degenerate");
    }
    const double phi = acov / var;  // lag-1 autocorrelation, AR(1) proxy for OU

    if (phi >= 1.0) {
        fit.rate = 0.0;  // random walk or explosive: no reversion
    } else if (phi <= 0.0) {
        fit.rate = kMeanReversionRateCap;
        fit.rate_capped = true;
    } else {
        fit.rate = -std::log(phi) / dt;
        if (fit.rate > kMeanReversionRateCap) {
            fit.rate = kMeanReversionRateCap;
            fit.rate_capped = true;
        }
    }
    return fit;
}

CalibratedInputs build_market_snapshot(const std::map<std::string, HistorySeries>& series,
                                       const CalibrationWindow& window, CaseTag case_tag,
                                       const RateConstants& rates) {
    const bool case2 = case_tag == CaseTag::Case2;
    std::vector<std::string> required = {"sp500", "ftse100", "gbpusd"};
    if (case2) {
        required.push_back("stoxx600");
        required.push_back("eurusd");
    }
    std::map<std::string, HistorySeries> hist;
    for (const auto& name : required) {
        const auto it = series.find(name);
        if (it == series.end()) throw DataError("missing instrument series: " + name);
        HistorySeries cut = truncate_to(it->second, window.as_of);
        // A rolling series needs window+1 closes; its lookback tail needs more.
        if (cut.size() < window.rolling + window.lookback) {
            throw DataError("insufficient data for " + name + " at as_of " + window.as_of +
                            ": need " + std::to_string(window.rolling + window.lookback) +
                            " observations on or before it, have " + std::to_string(cut.size()));
        }
        hist.emplace(name, std::move(cut));
    }
    if (case2 && !rates.r_f2) throw ConfigError("case2 calibration requires r_f2");

    CalibratedInputs out;
    const double dt = 1.0 / 252.0;

    // Rolling variance per asset; pooled statistics are averaged across assets.
    std::vector<std::string> assets = {"sp500", "ftse100"};
    if (case2) assets.push_back("stoxx600");
    std::map<std::string, std::vector<double>> var_series;
    std::map<std::string, double> v_last;
    double theta_sum = 0.0, kappa_sum = 0.0, sd_change_sum = 0.0;
    for (const auto& name : assets) {
        const RollingSeries vol = rolling_volatility(hist.at(name), window.rolling);
        std::vector<double> var(vol.values.size());
        std::transform(vol.values.begin(), vol.values.end(), var.begin(),
                       [](double v) { return v * v; });
        v_last[name] = var.back();
        const auto lb = tail(var, window.lookback);
        theta_sum += mean_of(lb);
        const MeanReversionFit fit = fit_mean_reversion(lb, dt);
        if (fit.rate_capped) out.notes.push_back("sv mean-reversion rate capped for " + name);
        kappa_sum += fit.rate;
        sd_change_sum += annualized_change_stdev(lb);
        var_series.emplace(name, std::move(var));
    }
    const double n_assets = static_cast<double>(assets.size());
    const double theta_hat = theta_sum / n_assets;
    const double kappa_hat = std::max(kappa_sum / n_assets, 1e-4);
    const double var_change_sd = sd_change_sum / n_assets;

    // Rolling correlation of the primary pair (SP500 vs FTSE100 returns).
    const RollingSeries corr =
        rolling_correlation(hist.at("sp500"), hist.at("ftse100"), window.rolling);
    const auto corr_lb = tail(corr.values, window.lookback);
    const double rho_bar = mean_of(corr_lb);
    const double rho0 = corr.values.back();
    const MeanReversionFit corr_fit = fit_mean_reversion(corr_lb, dt);
    if (corr_fit.rate_capped) out.notes.push_back("sc mean-reversion rate capped");
    const double sc_kappa = std::max(corr_fit.rate, 1e-4);
    const double sc_sigma = annualized_change_stdev(corr_lb);
    const double corr_level_sd = population_stdev(corr_lb);

    // Market snapshot.
    MarketSnapshot mkt;
    mkt.case_tag = case_tag;
    mkt.s0_usd = hist.at("sp500").closes.back();
    mkt.s0_gbp = hist.at("ftse100").closes.back();
    mkt.fx0_gbp = hist.at("gbpusd").closes.back();
    mkt.v0_usd = v_last.at("sp500");
    mkt.v0_gbp = v_last.at("ftse100");
    mkt.rho0 = rho0;
    mkt.r_d = rates.r_d;
    mkt.r_f1 = rates.r_f1;
    mkt.k1 = mkt.s0_usd;
    mkt.k2 = mkt.s0_gbp * mkt.fx0_gbp;
    if (case2) {
        mkt.s0_eur = hist.at("stoxx600").closes.back();
        mkt.fx0_eur = hist.at("eurusd").closes.back();
        mkt.v0_eur = v_last.at("stoxx600");
        mkt.r_f2 = rates.r_f2;
        mkt.k3 = *mkt.s0_eur * *mkt.fx0_eur;
    }

    // SV defaults. sigma is stored at the GARCH scale (diffusion sigma * v);
    // the sweep rescales it per variant so all variants share the same
    // instantaneous diffusion at v = theta.
    ModelSpec model;
    model.sv.variant = SvTag::GarchJump;
    model.sv.kappa = kappa_hat;
    model.sv.theta = theta_hat;
    model.sv.sigma = var_change_sd / theta_hat;
    model.sv.omega32 = kappa_hat;
    model.sv.zeta = 1.0;
    // Jump laws are artifact defaults; the paper's calibrated values are not
    // recoverable from the historical series alone.
    model.sv.jump = JumpParams{4.0, 0.02, 0.01};

    // SC defaults: Weibull (the paper's preferred variant) with the other
    // variants' fields populated for sweeps.
    model.sc.variant = ScTag::Weibull;
    model.sc.kappa = sc_kappa;
    model.sc.rho_bar = rho_bar;
    model.sc.sigma = sc_sigma;
    const double half_width = std::max(2.0 * corr_level_sd, 0.1);
    model.sc.h = std::min(0.995, rho_bar + half_width);
    model.sc.f = std::max(-0.995, rho_bar - half_width);
    model.sc.alpha = sc_kappa;

    // Weibull scale/shape by method of moments on the positive part of the
    // rolling correlation.
    std::vector<double> positive;
    for (double c : corr_lb) {
        if (c > 0.0) positive.push_back(c);
    }
    if (positive.size() >= 10) {
        const double m = mean_of(positive);
        const double sd = population_stdev(positive);
        const double cv2 = (sd * sd) / (m * m);
        const double k = cv2 > 1e-10 ? weibull_shape_from_cv2(cv2) : 50.0;
        model.sc.k_w = k;
        model.sc.lambda_w = m / std::tgamma(1.0 + 1.0 / k);
    } else {
        model.sc.k_w = 2.0;
        model.sc.lambda_w = 0.6;
        out.notes.push_back("weibull fit fell back to defaults: too few positive correlations");
    }

    // SER defaults per rate: last rolling FX volatility plus an OU fit on
    // the raw levels over the lookback.
    auto fit_rate = [&](const std::string& name, double r_f) {
        const HistorySeries& fx = hist.at(name);
        const RollingSeries vol = rolling_volatility(fx, window.rolling);
        SerParams ser;
        ser.variant = SerTag::Ou;
        ser.sigma_fx = vol.values.back();
        const MeanReversionFit fit = fit_mean_reversion(tail(fx.closes, window.lookback), dt);
        if (fit.rate_capped) out.notes.push_back("ou rate capped for " + name);
        ser.theta_ou = fit.rate;
        ser.mu_ou = fit.level;
        ser.jump = JumpParams{10.0, 0.0, 0.005};
        ser.r_f = r_f;
        ser.r_d = rates.r_d;
        return ser;
    };
    model.ser = fit_rate("gbpusd", rates.r_f1);
    if (case2) model.ser_eur = fit_rate("eurusd", *rates.r_f2);

    SvParams heston_check = model.sv;
    heston_check.sigma = model.sv.sigma * std::sqrt(theta_hat);
    if (!heston_check.feller_satisfied()) {
        out.notes.push_back("feller condition violated at heston scale: 2*kappa*theta <= sigma^2");
    }

    out.market = mkt;
    out.model = model;
    return out;
}

}  // namespace qmc
