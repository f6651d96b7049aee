#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "quantomc/config.hpp"
#include "quantomc/errors.hpp"
#include "quantomc/harness.hpp"
#include "quantomc/version.hpp"

namespace qmc {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write output file: " + path.string());
    out << content;
}

void write_manifest(const RunConfig& cfg, double elapsed_seconds) {
    std::string text;
    text += "# quanto-mc run manifest\n";
    text += "version = " + std::string(kVersion) + "\n";
    for (const auto& [key, value] : cfg.echo) text += key + " = " + value + "\n";
    for (const auto& note : cfg.notes) text += "# note: " + note + "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", elapsed_seconds);
    text += "elapsed_seconds = " + std::string(buf) + "\n";
    write_file(fs::path(cfg.out_dir) / "manifest.txt", text);
}

std::string variant_id_of(const RunConfig& cfg) {
    return to_string(cfg.model.sv.variant) + "-" + to_string(cfg.model.sc.variant) + "-" +
           to_string(cfg.model.ser.variant) + "-" + to_string(cfg.sim.scheme);
}

void warn_feller(const RunConfig& cfg) {
    const SvParams& sv = cfg.model.sv;
    if ((sv.variant == SvTag::Heston || sv.variant == SvTag::Bates) && !sv.feller_satisfied()) {
        std::cerr << "warning: Feller condition violated (2*kappa*theta <= sigma^2); "
                     "the variance process can reach zero\n";
    }
}

void run_price(const RunConfig& cfg) {
    warn_feller(cfg);
    const PriceReport rep = price_model(cfg.model, cfg.market, cfg.sim);
    const std::string id = variant_id_of(cfg);
    std::string csv = price_csv_header() + "\n" +
                      price_csv_row(id, to_string(cfg.model.sv.variant),
                                    to_string(cfg.model.sc.variant),
                                    to_string(cfg.model.ser.variant), to_string(cfg.sim.scheme),
                                    rep, "ok") +
                      "\n";
    write_file(fs::path(cfg.out_dir) / "price.csv", csv);
    std::printf("%s: price %.4f stderr %.4f ci [%.4f, %.4f] n %zu elapsed %.2fs\n", id.c_str(),
                rep.price, rep.std_error, rep.ci_low, rep.ci_high, rep.n_effective,
                rep.elapsed_seconds);
    if (cfg.dump_paths) {
        std::ofstream dump(*cfg.dump_paths);
        if (!dump) throw DataError("cannot write path dump file: " + *cfg.dump_paths);
        dump_paths_csv(cfg.model, cfg.market, cfg.sim, dump);
    }
}

void run_sweep_command(const RunConfig& cfg) {
    const VariantTable sc_table = run_sweep(cfg.model, cfg.market, cfg.sim,
                                            SweepKind::StochasticCorr);
    const VariantTable const_table = run_sweep(cfg.model, cfg.market, cfg.sim,
                                               SweepKind::ConstantCorr);
    const MergedReport merged = merge_benchmark(sc_table, const_table);
    write_file(fs::path(cfg.out_dir) / "sweep.csv", sweep_csv(sc_table));
    write_file(fs::path(cfg.out_dir) / "const_sweep.csv", sweep_csv(const_table));
    write_file(fs::path(cfg.out_dir) / "sweep.md",
               sweep_markdown(sc_table, &merged) + "\n" + sweep_markdown(const_table));
    std::size_t ok = 0;
    for (const auto& row : sc_table.rows) ok += row.ok() ? 1 : 0;
    std::printf("sweep: %zu/%zu variants ok, target %.4f, best constant placement %zu/%zu\n", ok,
                sc_table.rows.size(), sc_table.target, merged.best_const_placement,
                merged.rows.size());
}

void run_greeks(const RunConfig& cfg) {
    warn_feller(cfg);
    const GreekReport rep = corr_greeks(cfg.model, cfg.market, cfg.sim, cfg.greeks);
    const std::string id = variant_id_of(cfg);
    write_file(fs::path(cfg.out_dir) / "greeks.csv",
               greeks_csv_header() + "\n" + greeks_csv_row(id, rep) + "\n");
    std::printf("%s %s: cora %.4f (se %.4f), gora %.4f (se %.4f), h %.3g, base price %.4f\n",
                id.c_str(), to_string(rep.pair).c_str(), rep.cora, rep.cora_se, rep.gora,
                rep.gora_se, rep.h_used, rep.base.price);
}

// Emitted in the same schema parse_config reads, so a calibrate run's output
// can seed later explicit runs.
void run_calibrate(const RunConfig& cfg) {
    std::map<std::string, HistorySeries> series;
    for (const auto& [name, path] : cfg.data_files) series.emplace(name, ingest_csv(path));
    const CalibratedInputs calibrated =
        build_market_snapshot(series, *cfg.calibration, cfg.case_tag, cfg.rates);

    std::string text = "# calibrated inputs (as_of " + cfg.calibration->as_of + ")\n";
    text += "[run]\ncase = " + to_string(cfg.case_tag) + "\n\n";
    std::map<std::string, std::map<std::string, std::string>> sections;
    auto add = [&](const std::string& section, const std::string& key, const std::string& value) {
        sections[section][key] = value;
    };
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    const MarketSnapshot& mkt = calibrated.market;
    add("market", "s0_usd", num(mkt.s0_usd));
    add("market", "s0_gbp", num(mkt.s0_gbp));
    add("market", "fx0_gbp", num(mkt.fx0_gbp));
    add("market", "v0_usd", num(mkt.v0_usd));
    add("market", "v0_gbp", num(mkt.v0_gbp));
    add("market", "rho0", num(mkt.rho0));
    add("market", "r_d", num(mkt.r_d));
    add("market", "r_f1", num(mkt.r_f1));
    add("market", "k1", num(mkt.k1));
    add("market", "k2", num(mkt.k2));
    if (mkt.case_tag == CaseTag::Case2) {
        add("market", "s0_eur", num(*mkt.s0_eur));
        add("market", "fx0_eur", num(*mkt.fx0_eur));
        add("market", "v0_eur", num(*mkt.v0_eur));
        add("market", "r_f2", num(*mkt.r_f2));
        add("market", "k3", num(*mkt.k3));
    }
    const ModelSpec& model = calibrated.model;
    add("model", "sv", to_string(model.sv.variant));
    add("model", "sc", to_string(model.sc.variant));
    add("model", "ser", to_string(model.ser.variant));
    add("sv", "kappa", num(model.sv.kappa));
    add("sv", "theta", num(model.sv.theta));
    add("sv", "sigma", num(model.sv.sigma));
    add("sv", "omega32", num(model.sv.omega32));
    add("sv", "zeta", num(model.sv.zeta));
    if (model.sv.jump) {
        add("sv", "jump_lambda", num(model.sv.jump->lambda));
        add("sv", "jump_mu", num(model.sv.jump->mu_j));
        add("sv", "jump_sigma", num(model.sv.jump->sigma_j));
    }
    add("sc", "kappa", num(model.sc.kappa));
    add("sc", "rho_bar", num(model.sc.rho_bar));
    add("sc", "sigma", num(model.sc.sigma));
    add("sc", "h", num(model.sc.h));
    add("sc", "f", num(model.sc.f));
    add("sc", "alpha", num(model.sc.alpha));
    add("sc", "lambda", num(model.sc.lambda_w));
    add("sc", "k", num(model.sc.k_w));
    add("ser", "sigma_fx", num(model.ser.sigma_fx));
    add("ser", "theta_ou", num(model.ser.theta_ou));
    add("ser", "mu_ou", num(model.ser.mu_ou));
    if (model.ser.jump) {
        add("ser", "jump_lambda", num(model.ser.jump->lambda));
        add("ser", "jump_mu", num(model.ser.jump->mu_j));
        add("ser", "jump_sigma", num(model.ser.jump->sigma_j));
    }
    if (model.ser_eur) {
        add("ser_eur", "sigma_fx", num(model.ser_eur->sigma_fx));
        add("ser_eur", "theta_ou", num(model.ser_eur->theta_ou));
        add("ser_eur", "mu_ou", num(model.ser_eur->mu_ou));
        if (model.ser_eur->jump) {
            add("ser_eur", "jump_lambda", num(model.ser_eur->jump->lambda));
            add("ser_eur", "jump_mu", num(model.ser_eur->jump->mu_j));
            add("ser_eur", "jump_sigma", num(model.ser_eur->jump->sigma_j));
        }
    }
    for (const auto& [section, entries] : sections) {
        text += "[" + section + "]\n";
        for (const auto& [key, value] : entries) text += key + " = " + value + "\n";
        text += "\n";
    }
    for (const auto& note : calibrated.notes) text += "# note: " + note + "\n";
    write_file(fs::path(cfg.out_dir) / "calibrated.ini", text);
    std::printf("calibrate: wrote %s\n", (fs::path(cfg.out_dir) / "calibrated.ini").c_str());
}

}  // namespace

int run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(cfg.out_dir);
        for (const auto& [key, value] : cfg.echo) {
            std::fprintf(stderr, "config: %s = %s\n", key.c_str(), value.c_str());
        }
        for (const auto& note : cfg.notes) std::fprintf(stderr, "note: %s\n", note.c_str());
        switch (cfg.command) {
            case Command::Price: run_price(cfg); break;
            case Command::Sweep: run_sweep_command(cfg); break;
            case Command::Greeks: run_greeks(cfg); break;
            case Command::Calibrate: run_calibrate(cfg); break;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(cfg, elapsed);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace qmc
