#include "quantomc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "quantomc/errors.hpp"

namespace qmc {

namespace {

constexpr SvTag kSvTags[] = {SvTag::Heston, SvTag::Garch, SvTag::GarchJump, SvTag::Bates,
                             SvTag::ThreeHalves};
constexpr ScTag kScTags[] = {ScTag::WrightFisher, ScTag::Jacobi, ScTag::MeanReverting,
                             ScTag::Weibull};
constexpr SerTag kSerTags[] = {SerTag::Gbm, SerTag::Ou, SerTag::ExpLevy};
constexpr SchemeChoice kSchemes[] = {SchemeChoice::Euler, SchemeChoice::Milstein,
                                     SchemeChoice::RungeKutta};

constexpr std::size_t kTargetPool = 40;
constexpr std::size_t kTopCount = 30;

auto id_key(const VariantId& id) {
    return std::make_tuple(static_cast<int>(id.sv), static_cast<int>(id.sc),
                           static_cast<int>(id.ser), static_cast<int>(id.scheme));
}

std::string sanitize_status(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

// Diffusion magnitude of one SV variant at v = theta, per unit sigma.
double sv_diffusion_scale(SvTag tag, double theta) {
    switch (tag) {
        case SvTag::Heston:
        case SvTag::Bates:
            return std::sqrt(theta);
        case SvTag::Garch:
        case SvTag::GarchJump:
            return theta;
        case SvTag::ThreeHalves:
            return std::pow(theta, 1.5);
    }
    return 1.0;
}

}  // namespace

std::string VariantId::label() const {
    return to_string(sv) + "-" + to_string(sc) + "-" + to_string(ser) + "-" + to_string(scheme);
}

ModelSpec make_variant_model(const ModelSpec& base, SvTag sv, ScTag sc, SerTag ser) {
    ModelSpec model = base;
    model.sc_eur.reset();

    // The calibrated sigma describes the diffusion at v = theta under the
    // base variant's own scale; convert so every variant matches it there.
    const double theta = base.sv.theta;
    const double sigma_common = base.sv.sigma * sv_diffusion_scale(base.sv.variant, theta);
    model.sv.variant = sv;
    model.sv.sigma = sigma_common / sv_diffusion_scale(sv, theta);
    if (sv == SvTag::GarchJump || sv == SvTag::Bates) {
        if (!base.sv.jump) {
            throw ConfigError("sweep base model lacks sv jump parameters needed by " +
                              to_string(sv));
        }
        model.sv.jump = base.sv.jump;
    } else {
        model.sv.jump.reset();
    }
    if (sv == SvTag::ThreeHalves) {
        // Fixed point omega/theta32 = theta with local reversion speed omega.
        model.sv.omega32 = base.sv.omega32 > 0.0 ? base.sv.omega32 : base.sv.kappa;
        model.sv.theta = model.sv.omega32 / theta;
    }

    model.sc.variant = sc;
    if (sc == ScTag::Constant) {
        model.sc.rho_const.reset();  // constant at the market's rho0
    }

    auto stamp_ser = [&](SerParams& p) {
        p.variant = ser;
        if (ser == SerTag::ExpLevy) {
            if (!p.jump) {
                throw ConfigError("sweep base model lacks ser jump parameters needed by exp_levy");
            }
        } else {
            p.jump.reset();
        }
    };
    stamp_ser(model.ser);
    if (model.ser_eur) stamp_ser(*model.ser_eur);
    return model;
}

double record_timing(const std::function<void()>& run) {
    const auto start = std::chrono::steady_clock::now();
    run();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

VariantTable run_sweep(const ModelSpec& base, const MarketSnapshot& mkt, const SimConfig& cfg,
                       SweepKind kind) {
    VariantTable table;
    table.kind = kind;
    const bool constant = kind == SweepKind::ConstantCorr;
    const std::size_t n_sc = constant ? 1 : std::size(kScTags);
    table.rows.reserve(std::size(kSvTags) * n_sc * std::size(kSerTags) * std::size(kSchemes));

    for (SvTag sv : kSvTags) {
        for (std::size_t isc = 0; isc < n_sc; ++isc) {
            const ScTag sc = constant ? ScTag::Constant : kScTags[isc];
            for (SerTag ser : kSerTags) {
                for (SchemeChoice scheme : kSchemes) {
                    VariantRow row;
                    row.id = VariantId{sv, sc, ser, scheme};
                    SimConfig vcfg = cfg;
                    vcfg.scheme = scheme;
                    const double elapsed = record_timing([&] {
                        try {
                            const ModelSpec model = make_variant_model(base, sv, sc, ser);
                            row.report = price_model(model, mkt, vcfg);
                        } catch (const NumericalBlowupError& e) {
                            row.status = sanitize_status(std::string("blowup: ") + e.what());
                        } catch (const Error& e) {
                            row.status = sanitize_status(std::string("error: ") + e.what());
                        }
                    });
                    row.report.elapsed_seconds = elapsed;
                    table.rows.push_back(std::move(row));
                }
            }
        }
    }
    rank_and_score(table);
    return table;
}

void rank_and_score(VariantTable& table) {
    std::vector<std::size_t> ok_idx;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].ok()) ok_idx.push_back(i);
    }
    std::sort(ok_idx.begin(), ok_idx.end(), [&](std::size_t a, std::size_t b) {
        const VariantRow& ra = table.rows[a];
        const VariantRow& rb = table.rows[b];
        if (ra.report.std_error != rb.report.std_error) {
            return ra.report.std_error < rb.report.std_error;
        }
        return id_key(ra.id) < id_key(rb.id);
    });
    for (std::size_t r = 0; r < ok_idx.size(); ++r) {
        table.rows[ok_idx[r]].rank_se = static_cast<int>(r + 1);
    }

    const std::size_t pool = std::min(kTargetPool, ok_idx.size());
    table.degraded_target = ok_idx.size() < kTargetPool;
    if (pool > 0) {
        double sum = 0.0;
        for (std::size_t r = 0; r < pool; ++r) sum += table.rows[ok_idx[r]].report.price;
        table.target = sum / static_cast<double>(pool);
    }

    if (table.target != 0.0) {
        for (std::size_t i : ok_idx) {
            VariantRow& row = table.rows[i];
            row.pct_error = 100.0 * std::fabs(row.report.price - table.target) / table.target;
        }
    }
    std::sort(ok_idx.begin(), ok_idx.end(), [&](std::size_t a, std::size_t b) {
        const VariantRow& ra = table.rows[a];
        const VariantRow& rb = table.rows[b];
        if (ra.pct_error != rb.pct_error) return ra.pct_error < rb.pct_error;
        return id_key(ra.id) < id_key(rb.id);
    });
    for (std::size_t r = 0; r < ok_idx.size(); ++r) {
        VariantRow& row = table.rows[ok_idx[r]];
        row.rank_pe = static_cast<int>(r + 1);
        row.top30 = r < kTopCount;
    }
}

MergedReport merge_benchmark(const VariantTable& sc_table, const VariantTable& const_table) {
    MergedReport report;
    report.target = sc_table.target;
    if (sc_table.rows.empty() || const_table.rows.empty()) {
        throw DataError("merge_benchmark: empty variant table");
    }
    auto push_rows = [&](const VariantTable& table, bool constant) {
        for (const VariantRow& row : table.rows) {
            if (!row.ok()) continue;
            MergedRow m;
            m.id = row.id;
            m.constant_corr = constant;
            m.price = row.report.price;
            m.pct_error = report.target != 0.0
                              ? 100.0 * std::fabs(row.report.price - report.target) / report.target
                              : 0.0;
            report.rows.push_back(m);
        }
    };
    push_rows(sc_table, false);
    push_rows(const_table, true);
    std::sort(report.rows.begin(), report.rows.end(), [](const MergedRow& a, const MergedRow& b) {
        if (a.pct_error != b.pct_error) return a.pct_error < b.pct_error;
        if (a.constant_corr != b.constant_corr) return !a.constant_corr;
        return id_key(a.id) < id_key(b.id);
    });
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        if (report.rows[i].constant_corr) {
            report.best_const_placement = i + 1;
            break;
        }
    }
    return report;
}

std::string sweep_csv(const VariantTable& table) {
    std::string out =
        "sv,sc,ser,scheme,price,stderr,ci_low,ci_high,elapsed_s,pct_error,rank_se,rank_pe,"
        "top30,status\n";
    char buf[512];
    for (const VariantRow& row : table.rows) {
        out += to_string(row.id.sv) + "," + to_string(row.id.sc) + "," + to_string(row.id.ser) +
               "," + to_string(row.id.scheme);
        if (row.ok()) {
            std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,%.10g,%.10g,%.3f,%.10g,%d,%d,%d,ok\n",
                          row.report.price, row.report.std_error, row.report.ci_low,
                          row.report.ci_high, row.report.elapsed_seconds, row.pct_error,
                          row.rank_se, row.rank_pe, row.top30 ? 1 : 0);
        } else {
            std::snprintf(buf, sizeof(buf), ",,,,,%.3f,,,,0,%s\n", row.report.elapsed_seconds,
                          row.status.c_str());
        }
        out += buf;
    }
    return out;
}

std::string sweep_markdown(const VariantTable& table, const MergedReport* merged) {
    std::string out;
    char buf[512];
    out += table.kind == SweepKind::StochasticCorr
               ? "## Stochastic-correlation sweep\n\n"
               : "## Constant-correlation benchmark sweep\n\n";
    std::snprintf(buf, sizeof(buf),
                  "Target value (mean price of the %d lowest-stderr variants): %.4f%s\n\n", 40,
                  table.target, table.degraded_target ? " (degraded: fewer than 40 successes)" : "");
    out += buf;
    out += "| rank | sv | sc | ser | scheme | price | stderr | 95% CI | pct error | elapsed s |\n";
    out += "|---:|---|---|---|---|---:|---:|---:|---:|---:|\n";

    std::vector<const VariantRow*> ordered;
    for (const VariantRow& row : table.rows) {
        if (row.ok()) ordered.push_back(&row);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const VariantRow* a, const VariantRow* b) { return a->rank_pe < b->rank_pe; });
    for (const VariantRow* row : ordered) {
        const bool bold = row->top30;
        const char* b = bold ? "**" : "";
        std::snprintf(buf, sizeof(buf),
                      "| %d | %s%s%s | %s%s%s | %s%s%s | %s%s%s | %.4f | %.4f | [%.4f, %.4f] | "
                      "%.4f | %.3f |\n",
                      row->rank_pe, b, to_string(row->id.sv).c_str(), b, b,
                      to_string(row->id.sc).c_str(), b, b, to_string(row->id.ser).c_str(), b, b,
                      to_string(row->id.scheme).c_str(), b, row->report.price,
                      row->report.std_error, row->report.ci_low, row->report.ci_high,
                      row->pct_error, row->report.elapsed_seconds);
        out += buf;
    }
    std::size_t failures = table.rows.size() - ordered.size();
    if (failures > 0) {
        out += "\nFailed variants:\n\n";
        for (const VariantRow& row : table.rows) {
            if (!row.ok()) out += "- " + row.id.label() + ": " + row.status + "\n";
        }
    }
    if (merged && merged->best_const_placement > 0) {
        std::snprintf(buf, sizeof(buf),
                      "\nBest constant-correlation variant places %zu%s overall of %zu when "
                      "re-scored against the stochastic-correlation target.\n",
                      merged->best_const_placement,
                      merged->best_const_placement == 1   ? "st"
                      : merged->best_const_placement == 2 ? "nd"
                      : merged->best_const_placement == 3 ? "rd"
                                                          : "th",
                      merged->rows.size());
        out += buf;
    }
    return out;
}

}  // namespace qmc
