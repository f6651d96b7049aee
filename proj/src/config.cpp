#include "quantomc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "quantomc/errors.hpp"

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

// Flat key-value text with [section] headers; '#' and ';' start comments.
std::map<std::string, std::string> parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(path + ": line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = to_lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = to_lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ": line " + std::to_string(line_no) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full)) {
            throw ConfigError(path + ": line " + std::to_string(line_no) + ": duplicate key '" +
                              full + "'");
        }
        out[full] = value;
    }
    return out;
}

class KeyReader {
public:
    explicit KeyReader(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::optional<std::string> get(const std::string& key) {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        return get(key).value_or(fallback);
    }

    std::string require_string(const std::string& key) {
        auto v = get(key);
        if (!v) throw ConfigError("missing required config key '" + key + "'");
        return *v;
    }

    double get_double(const std::string& key, double fallback) {
        const auto v = get(key);
        return v ? parse_double(key, *v) : fallback;
    }

    std::optional<double> get_optional_double(const std::string& key) {
        const auto v = get(key);
        if (!v) return std::nullopt;
        return parse_double(key, *v);
    }

    double require_double(const std::string& key) {
        return parse_double(key, require_string(key));
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        try {
            return std::stoull(*v);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" +
                              *v + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        const std::string s = to_lower(*v);
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigError("config key '" + key + "': expected a boolean, got '" + *v + "'");
    }

    void reject_unknown() const {
        std::string unknown;
        for (const auto& [key, value] : values_) {
            if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
        }
        if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
    }

private:
    static double parse_double(const std::string& key, const std::string& text) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
        }
        return v;
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void echo_market(std::map<std::string, std::string>& echo, const MarketSnapshot& mkt) {
    echo["market.s0_usd"] = format_double(mkt.s0_usd);
    echo["market.s0_gbp"] = format_double(mkt.s0_gbp);
    echo["market.fx0_gbp"] = format_double(mkt.fx0_gbp);
    echo["market.v0_usd"] = format_double(mkt.v0_usd);
    echo["market.v0_gbp"] = format_double(mkt.v0_gbp);
    echo["market.rho0"] = format_double(mkt.rho0);
    echo["market.r_d"] = format_double(mkt.r_d);
    echo["market.r_f1"] = format_double(mkt.r_f1);
    echo["market.k1"] = format_double(mkt.k1);
    echo["market.k2"] = format_double(mkt.k2);
    if (mkt.case_tag == CaseTag::Case2) {
        echo["market.s0_eur"] = format_double(*mkt.s0_eur);
        echo["market.fx0_eur"] = format_double(*mkt.fx0_eur);
        echo["market.v0_eur"] = format_double(*mkt.v0_eur);
        echo["market.r_f2"] = format_double(*mkt.r_f2);
        echo["market.k3"] = format_double(*mkt.k3);
    }
}

void echo_model(std::map<std::string, std::string>& echo, const ModelSpec& model) {
    echo["model.sv"] = to_string(model.sv.variant);
    echo["model.sc"] = to_string(model.sc.variant);
    echo["model.ser"] = to_string(model.ser.variant);
    echo["sv.kappa"] = format_double(model.sv.kappa);
    echo["sv.theta"] = format_double(model.sv.theta);
    echo["sv.sigma"] = format_double(model.sv.sigma);
    echo["sv.omega32"] = format_double(model.sv.omega32);
    echo["sv.zeta"] = format_double(model.sv.zeta);
    if (model.sv.jump) {
        echo["sv.jump_lambda"] = format_double(model.sv.jump->lambda);
        echo["sv.jump_mu"] = format_double(model.sv.jump->mu_j);
        echo["sv.jump_sigma"] = format_double(model.sv.jump->sigma_j);
    }
    echo["sc.kappa"] = format_double(model.sc.kappa);
    echo["sc.rho_bar"] = format_double(model.sc.rho_bar);
    echo["sc.sigma"] = format_double(model.sc.sigma);
    echo["sc.h"] = format_double(model.sc.h);
    echo["sc.f"] = format_double(model.sc.f);
    echo["sc.alpha"] = format_double(model.sc.alpha);
    echo["sc.lambda"] = format_double(model.sc.lambda_w);
    echo["sc.k"] = format_double(model.sc.k_w);
    if (model.sc.rho_const) echo["sc.rho_const"] = format_double(*model.sc.rho_const);
    echo["sc.weibull_sqrt_diffusion"] = model.sc.weibull_sqrt_diffusion ? "true" : "false";
    echo["ser.sigma_fx"] = format_double(model.ser.sigma_fx);
    echo["ser.theta_ou"] = format_double(model.ser.theta_ou);
    echo["ser.mu_ou"] = format_double(model.ser.mu_ou);
    if (model.ser.jump) {
        echo["ser.jump_lambda"] = format_double(model.ser.jump->lambda);
        echo["ser.jump_mu"] = format_double(model.ser.jump->mu_j);
        echo["ser.jump_sigma"] = format_double(model.ser.jump->sigma_j);
    }
    if (model.ser_eur) {
        echo["ser_eur.sigma_fx"] = format_double(model.ser_eur->sigma_fx);
        echo["ser_eur.theta_ou"] = format_double(model.ser_eur->theta_ou);
        echo["ser_eur.mu_ou"] = format_double(model.ser_eur->mu_ou);
        if (model.ser_eur->jump) {
            echo["ser_eur.jump_lambda"] = format_double(model.ser_eur->jump->lambda);
            echo["ser_eur.jump_mu"] = format_double(model.ser_eur->jump->mu_j);
            echo["ser_eur.jump_sigma"] = format_double(model.ser_eur->jump->sigma_j);
        }
    }
}

std::optional<JumpParams> read_jump(KeyReader& keys, const std::string& section,
                                    const char* mu_key, const char* sigma_key) {
    const auto lambda = keys.get_optional_double(section + ".jump_lambda");
    const auto mu = keys.get_optional_double(section + "." + mu_key);
    const auto sigma = keys.get_optional_double(section + "." + sigma_key);
    if (!lambda && !mu && !sigma) return std::nullopt;
    JumpParams jump;
    jump.lambda = lambda.value_or(0.0);
    jump.mu_j = mu.value_or(0.0);
    jump.sigma_j = sigma.value_or(0.0);
    return jump;
}

}  // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::Price: return "price";
        case Command::Sweep: return "sweep";
        case Command::Greeks: return "greeks";
        case Command::Calibrate: return "calibrate";
    }
    return "?";
}

RunConfig parse_config(const CliOptions& options) {
    KeyReader keys(parse_ini(options.config_path));
    RunConfig cfg;
    cfg.command = options.command;
    cfg.case_tag = parse_case_tag(keys.get_string("run.case", "case1"));
    cfg.out_dir = options.out_dir.value_or(keys.get_string("run.out_dir", "out"));
    cfg.dump_paths = options.dump_paths;
    const bool case2 = cfg.case_tag == CaseTag::Case2;

    // Interest rates are constants read from the config, never estimated.
    cfg.rates.r_d = keys.require_double("market.r_d");
    cfg.rates.r_f1 = keys.require_double("market.r_f1");
    cfg.rates.r_f2 = keys.get_optional_double("market.r_f2");
    if (case2 && !cfg.rates.r_f2) throw ConfigError("case2 requires market.r_f2");

    const bool has_data = keys.has("data.as_of") || keys.has("data.sp500");
    if (has_data) {
        CalibrationWindow window;
        window.as_of = keys.require_string("data.as_of");
        window.lookback = static_cast<std::size_t>(keys.get_u64("data.lookback", 252));
        window.rolling = static_cast<std::size_t>(keys.get_u64("data.window", 30));
        cfg.calibration = window;

        std::vector<std::string> instruments = {"sp500", "ftse100", "gbpusd"};
        const std::vector<std::string> eur_instruments = {"stoxx600", "eurusd"};
        if (case2) {
            instruments.insert(instruments.end(), eur_instruments.begin(), eur_instruments.end());
        } else {
            for (const auto& name : eur_instruments) {
                if (keys.has("data." + name)) {
                    throw ConfigError("case1 takes exactly sp500, ftse100, and gbpusd; remove data." +
                                      name);
                }
            }
        }
        std::map<std::string, HistorySeries> series;
        for (const auto& name : instruments) {
            const std::string path = keys.require_string("data." + name);
            if (!std::filesystem::exists(path)) {
                throw ConfigError("config key 'data." + name + "': file does not exist: " + path);
            }
            cfg.data_files[name] = path;
            series.emplace(name, ingest_csv(path));
        }
        CalibratedInputs calibrated =
            build_market_snapshot(series, window, cfg.case_tag, cfg.rates);
        cfg.market = calibrated.market;
        cfg.model = calibrated.model;
        cfg.notes = calibrated.notes;
        cfg.echo["data.as_of"] = window.as_of;
        cfg.echo["data.lookback"] = std::to_string(window.lookback);
        cfg.echo["data.window"] = std::to_string(window.rolling);
        for (const auto& [name, path] : cfg.data_files) cfg.echo["data." + name] = path;
    } else {
        cfg.market.case_tag = cfg.case_tag;
        cfg.market.r_d = cfg.rates.r_d;
        cfg.market.r_f1 = cfg.rates.r_f1;
        if (case2) cfg.market.r_f2 = cfg.rates.r_f2;
    }

    // Explicit market values override calibrated ones.
    cfg.market.s0_usd = keys.get_double("market.s0_usd", cfg.market.s0_usd);
    cfg.market.s0_gbp = keys.get_double("market.s0_gbp", cfg.market.s0_gbp);
    cfg.market.fx0_gbp = keys.get_double("market.fx0_gbp", cfg.market.fx0_gbp);
    cfg.market.v0_usd = keys.get_double("market.v0_usd", cfg.market.v0_usd);
    cfg.market.v0_gbp = keys.get_double("market.v0_gbp", cfg.market.v0_gbp);
    cfg.market.rho0 = keys.get_double("market.rho0", cfg.market.rho0);
    cfg.market.k1 = keys.get_double("market.k1", cfg.market.k1);
    cfg.market.k2 = keys.get_double("market.k2", cfg.market.k2);
    if (case2) {
        if (auto v = keys.get_optional_double("market.s0_eur")) cfg.market.s0_eur = *v;
        if (auto v = keys.get_optional_double("market.fx0_eur")) cfg.market.fx0_eur = *v;
        if (auto v = keys.get_optional_double("market.v0_eur")) cfg.market.v0_eur = *v;
        if (auto v = keys.get_optional_double("market.k3")) cfg.market.k3 = *v;
    }

    // Model selection and parameter overrides.
    if (auto v = keys.get("model.sv")) cfg.model.sv.variant = parse_sv_tag(*v);
    if (auto v = keys.get("model.sc")) cfg.model.sc.variant = parse_sc_tag(*v);
    if (auto v = keys.get("model.ser")) {
        cfg.model.ser.variant = parse_ser_tag(*v);
        if (cfg.model.ser_eur) cfg.model.ser_eur->variant = cfg.model.ser.variant;
    }
    cfg.model.sv.kappa = keys.get_double("sv.kappa", cfg.model.sv.kappa);
    cfg.model.sv.theta = keys.get_double("sv.theta", cfg.model.sv.theta);
    cfg.model.sv.sigma = keys.get_double("sv.sigma", cfg.model.sv.sigma);
    cfg.model.sv.omega32 = keys.get_double("sv.omega32", cfg.model.sv.omega32);
    cfg.model.sv.zeta = keys.get_double("sv.zeta", cfg.model.sv.zeta);
    if (auto jump = read_jump(keys, "sv", "jump_mu", "jump_sigma")) cfg.model.sv.jump = jump;
    const bool sv_wants_jump =
        cfg.model.sv.variant == SvTag::GarchJump || cfg.model.sv.variant == SvTag::Bates;
    if (!sv_wants_jump) cfg.model.sv.jump.reset();

    cfg.model.sc.kappa = keys.get_double("sc.kappa", cfg.model.sc.kappa);
    cfg.model.sc.rho_bar = keys.get_double("sc.rho_bar", cfg.model.sc.rho_bar);
    cfg.model.sc.sigma = keys.get_double("sc.sigma", cfg.model.sc.sigma);
    cfg.model.sc.h = keys.get_double("sc.h", cfg.model.sc.h);
    cfg.model.sc.f = keys.get_double("sc.f", cfg.model.sc.f);
    cfg.model.sc.alpha = keys.get_double("sc.alpha", cfg.model.sc.alpha);
    cfg.model.sc.lambda_w = keys.get_double("sc.lambda", cfg.model.sc.lambda_w);
    cfg.model.sc.k_w = keys.get_double("sc.k", cfg.model.sc.k_w);
    if (auto v = keys.get_optional_double("sc.rho_const")) cfg.model.sc.rho_const = *v;
    cfg.model.sc.weibull_sqrt_diffusion =
        keys.get_bool("sc.weibull_sqrt_diffusion", cfg.model.sc.weibull_sqrt_diffusion);

    cfg.model.ser.sigma_fx = keys.get_double("ser.sigma_fx", cfg.model.ser.sigma_fx);
    cfg.model.ser.theta_ou = keys.get_double("ser.theta_ou", cfg.model.ser.theta_ou);
    cfg.model.ser.mu_ou = keys.get_double("ser.mu_ou", cfg.model.ser.mu_ou);
    if (auto jump = read_jump(keys, "ser", "jump_mu", "jump_sigma")) cfg.model.ser.jump = jump;
    if (cfg.model.ser.variant != SerTag::ExpLevy) cfg.model.ser.jump.reset();
    cfg.model.ser.r_f = cfg.rates.r_f1;
    cfg.model.ser.r_d = cfg.rates.r_d;
    if (case2) {
        if (!cfg.model.ser_eur) {
            cfg.model.ser_eur = cfg.model.ser;  // default: GBP-rate parameters
        }
        cfg.model.ser_eur->sigma_fx =
            keys.get_double("ser_eur.sigma_fx", cfg.model.ser_eur->sigma_fx);
        cfg.model.ser_eur->theta_ou =
            keys.get_double("ser_eur.theta_ou", cfg.model.ser_eur->theta_ou);
        cfg.model.ser_eur->mu_ou = keys.get_double("ser_eur.mu_ou", cfg.model.ser_eur->mu_ou);
        if (auto jump = read_jump(keys, "ser_eur", "jump_mu", "jump_sigma")) {
            cfg.model.ser_eur->jump = jump;
        }
        if (cfg.model.ser_eur->variant != SerTag::ExpLevy) cfg.model.ser_eur->jump.reset();
        cfg.model.ser_eur->r_f = *cfg.rates.r_f2;
        cfg.model.ser_eur->r_d = cfg.rates.r_d;
    } else {
        cfg.model.ser_eur.reset();
    }

    // Simulation settings; flags override file values.
    cfg.sim.n_paths = static_cast<std::size_t>(keys.get_u64("sim.paths", 500'000));
    if (options.paths) cfg.sim.n_paths = *options.paths;
    cfg.sim.horizon_years = keys.get_double("sim.horizon_years", 1.0);
    cfg.sim.n_steps = static_cast<std::size_t>(keys.get_u64("sim.steps", 0));
    cfg.sim.seed = keys.get_u64("sim.seed", 1);
    if (options.seed) cfg.sim.seed = *options.seed;
    cfg.sim.scheme = parse_scheme(keys.get_string("sim.scheme", "milstein"));
    cfg.sim.antithetic = keys.get_bool("sim.antithetic", false);
    cfg.sim.workers = static_cast<unsigned>(keys.get_u64("sim.workers", 1));

    cfg.greeks.h = keys.get_double("greeks.h", 0.01);
    cfg.greeks.mode = parse_bump_mode(keys.get_string("greeks.mode", "parallel_shift"));
    cfg.greeks.pair = parse_corr_pair(keys.get_string("greeks.pair", "gbp_usd"));

    keys.reject_unknown();

    // Validate everything now so failures carry exit code 2. The calibrate
    // command builds its own snapshot, so market completeness is not required.
    try {
        cfg.sim.validate();
        if (cfg.command != Command::Calibrate) {
            cfg.market.validate();
            cfg.model.validate();
        }
    } catch (const InvalidParameterError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.command == Command::Calibrate && !cfg.calibration) {
        throw ConfigError("the calibrate command requires a [data] section");
    }

    cfg.echo["run.command"] = to_string(cfg.command);
    cfg.echo["run.case"] = to_string(cfg.case_tag);
    cfg.echo["run.out_dir"] = cfg.out_dir;
    cfg.echo["sim.paths"] = std::to_string(cfg.sim.n_paths);
    cfg.echo["sim.horizon_years"] = format_double(cfg.sim.horizon_years);
    cfg.echo["sim.steps"] = std::to_string(cfg.sim.steps());
    cfg.echo["sim.seed"] = std::to_string(cfg.sim.seed);
    cfg.echo["sim.scheme"] = to_string(cfg.sim.scheme);
    cfg.echo["sim.antithetic"] = cfg.sim.antithetic ? "true" : "false";
    cfg.echo["sim.workers"] = std::to_string(cfg.sim.worker_count());
    if (cfg.command == Command::Greeks) {
        cfg.echo["greeks.h"] = format_double(cfg.greeks.h);
        cfg.echo["greeks.mode"] = to_string(cfg.greeks.mode);
        cfg.echo["greeks.pair"] = to_string(cfg.greeks.pair);
    }
    if (cfg.command != Command::Calibrate) {
        echo_market(cfg.echo, cfg.market);
        echo_model(cfg.echo, cfg.model);
    }
    return cfg;
}

}  // namespace qmc
