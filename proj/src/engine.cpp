#include "quantomc/engine.hpp"

#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "quantomc/errors.hpp"
#include "quantomc/stochastics.hpp"

namespace qmc {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw InvalidParameterError(message);
}

struct PathState {
    double v_usd, v_gbp, v_eur;
    double rho_usd, rho_eur;
    double fx_gbp, fx_eur;
    double s_usd, s_gbp, s_eur;
};

using PathRecorder = std::function<void(std::uint64_t path, std::uint64_t step, const PathState&)>;

// Immutable per-run context shared by all workers.
class SimKernel {
public:
    SimKernel(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg)
        : mkt_(mkt), cfg_(cfg), case2_(mkt.case_tag == CaseTag::Case2) {
        model.validate();
        mkt.validate();
        cfg.validate();
        if (case2_ && !model.ser_eur) {
            throw ConfigError("case2 requires EUR exchange-rate parameters (ser_eur)");
        }

        n_steps_ = cfg.steps();
        dt_ = cfg.dt();
        sqrt_dt_ = std::sqrt(dt_);

        sv_coeffs_ = sv_coefficients(model.sv);
        sv_jump_ = model.sv.jump;

        sc_usd_coeffs_ = sc_coefficients(model.sc);
        const ScParams& sc_eur = model.sc_eur ? *model.sc_eur : model.sc;
        sc_eur_coeffs_ = sc_coefficients(sc_eur);
        sc_active_ = model.sc.variant != ScTag::Constant ||
                     (model.sc_eur && model.sc_eur->variant != ScTag::Constant);

        SerParams ser_gbp = model.ser;
        ser_gbp.r_f = mkt.r_f1;
        ser_gbp.r_d = mkt.r_d;
        ser_gbp_coeffs_ = ser_coefficients(ser_gbp);
        ser_gbp_jump_ = ser_gbp.variant == SerTag::ExpLevy ? ser_gbp.jump : std::nullopt;
        if (case2_) {
            SerParams ser_eur = *model.ser_eur;
            ser_eur.r_f = *mkt.r_f2;
            ser_eur.r_d = mkt.r_d;
            ser_eur_coeffs_ = ser_coefficients(ser_eur);
            ser_eur_jump_ = ser_eur.variant == SerTag::ExpLevy ? ser_eur.jump : std::nullopt;
        }

        // Initial states projected into their domains before the first step.
        init_.v_usd = clamp_lo0(mkt.v0_usd);
        init_.v_gbp = clamp_lo0(mkt.v0_gbp);
        init_.v_eur = case2_ ? clamp_lo0(*mkt.v0_eur) : 0.0;
        const double rho0_usd =
            model.sc.variant == ScTag::Constant && model.sc.rho_const ? *model.sc.rho_const
                                                                      : mkt.rho0;
        const double rho0_eur_raw = mkt.rho0_eur ? *mkt.rho0_eur : rho0_usd;
        init_.rho_usd = sc_usd_coeffs_.domain.clamp(rho0_usd);
        init_.rho_eur = sc_eur_coeffs_.domain.clamp(rho0_eur_raw);
        init_.fx_gbp = mkt.fx0_gbp;
        init_.fx_eur = case2_ ? *mkt.fx0_eur : 0.0;
        init_.s_usd = mkt.s0_usd;
        init_.s_gbp = mkt.s0_gbp;
        init_.s_eur = case2_ ? *mkt.s0_eur : 0.0;
    }

    bool case2() const { return case2_; }
    std::size_t steps() const { return n_steps_; }

    void simulate_path(std::uint64_t path, bool negate, PathState& st,
                       const PathRecorder* recorder = nullptr) const {
        st = init_;
        if (recorder) (*recorder)(path, 0, st);
        for (std::size_t j = 0; j < n_steps_; ++j) {
            advance_one_step(path, j, negate, st);
            if (recorder) (*recorder)(path, j + 1, st);
        }
    }

private:
    static double clamp_lo0(double x) { return x > 0.0 ? x : 0.0; }

    PathStream stream(std::uint64_t path, ProcessTag tag) const {
        return PathStream{cfg_.seed, path, tag};
    }

    double advance_process(const CoefficientSet& cs, const char* name, double x, double t,
                           std::uint64_t path, std::uint64_t j, ProcessTag w_tag,
                           const std::optional<JumpParams>& jp, ProcessTag j_tag,
                           bool negate) const {
        const double z_raw = stream(path, w_tag).normal(j, 0);
        const double z = negate ? antithetic_of(z_raw) : z_raw;
        double dj = 0.0;
        if (jp) dj = jump_increment(stream(path, j_tag), j, dt_, *jp).total;
        const StepInput in{x, t, dt_, sqrt_dt_ * z, z, dj};
        return finish_step(step(cfg_.scheme, cs, in), cs, name, path, j);
    }

    double finish_step(double next, const CoefficientSet& cs, const char* name,
                       std::uint64_t path, std::uint64_t j) const {
        if (!std::isfinite(next)) throw NumericalBlowupError(name, path, j);
        next = cs.domain.clamp(next);
        if (!cs.domain.contains(next)) throw BoundsViolationError(name, path, j, next);
        return next;
    }

    double advance_asset(double rate, double v_start, const char* name, double s,
                         double t, double dw, std::uint64_t path, std::uint64_t j) const {
        // Assets always use Euler; the scheme choice governs SV, SC, and SER.
        const CoefficientSet cs = asset_coefficients(rate, v_start);
        const StepInput in{s, t, dt_, dw, dw / sqrt_dt_, 0.0};
        return finish_step(euler_step(cs, in), cs, name, path, j);
    }

    void advance_one_step(std::uint64_t path, std::uint64_t j, bool negate, PathState& st) const {
        const double t = static_cast<double>(j) * dt_;

        // Start-of-step values; the asset updates consume these.
        const double v_usd0 = st.v_usd;
        const double v_gbp0 = st.v_gbp;
        const double v_eur0 = st.v_eur;
        const double rho_usd0 = st.rho_usd;
        const double rho_eur0 = st.rho_eur;

        st.v_usd = advance_process(sv_coeffs_, "v_usd", st.v_usd, t, path, j,
                                   ProcessTag::VarUsdW, sv_jump_, ProcessTag::VarUsdJ, negate);
        st.v_gbp = advance_process(sv_coeffs_, "v_gbp", st.v_gbp, t, path, j,
                                   ProcessTag::VarGbpW, sv_jump_, ProcessTag::VarGbpJ, negate);
        if (case2_) {
            st.v_eur = advance_process(sv_coeffs_, "v_eur", st.v_eur, t, path, j,
                                       ProcessTag::VarEurW, sv_jump_, ProcessTag::VarEurJ, negate);
        }

        if (sc_active_) {
            // Both pair processes consume the same Brownian stream; their
            // paths coincide unless the greeks module bumped one of them.
            const double z_raw = stream(path, ProcessTag::CorrW).normal(j, 0);
            const double z = negate ? antithetic_of(z_raw) : z_raw;
            const StepInput in_usd{st.rho_usd, t, dt_, sqrt_dt_ * z, z, 0.0};
            st.rho_usd = finish_step(step(cfg_.scheme, sc_usd_coeffs_, in_usd), sc_usd_coeffs_,
                                     "rho_gbp_usd", path, j);
            if (case2_) {
                const StepInput in_eur{st.rho_eur, t, dt_, sqrt_dt_ * z, z, 0.0};
                st.rho_eur = finish_step(step(cfg_.scheme, sc_eur_coeffs_, in_eur), sc_eur_coeffs_,
                                         "rho_eur_usd", path, j);
            }
        }

        st.fx_gbp = advance_process(ser_gbp_coeffs_, "fx_gbp", st.fx_gbp, t, path, j,
                                    ProcessTag::FxGbpZ, ser_gbp_jump_, ProcessTag::FxGbpJ, negate);
        if (case2_) {
            st.fx_eur = advance_process(ser_eur_coeffs_, "fx_eur", st.fx_eur, t, path, j,
                                        ProcessTag::FxEurZ, ser_eur_jump_, ProcessTag::FxEurJ,
                                        negate);
        }

        // Assets: GBP uses its own base increment, USD (and EUR) mix that
        // base increment with an independent component through the current
        // correlation. FX Brownian motions stay unmixed.
        const double z_gbp_raw = stream(path, ProcessTag::AssetGbpW).normal(j, 0);
        const double z_usd_raw = stream(path, ProcessTag::AssetUsdZ).normal(j, 0);
        const double z_gbp = negate ? antithetic_of(z_gbp_raw) : z_gbp_raw;
        const double z_usd = negate ? antithetic_of(z_usd_raw) : z_usd_raw;
        const double dw_gbp = sqrt_dt_ * z_gbp;
        const double dw_usd = mix_correlated(dw_gbp, sqrt_dt_ * z_usd, rho_usd0);

        st.s_gbp = advance_asset(mkt_.r_f1, v_gbp0, "s_gbp", st.s_gbp, t, dw_gbp, path, j);
        st.s_usd = advance_asset(mkt_.r_d, v_usd0, "s_usd", st.s_usd, t, dw_usd, path, j);
        if (case2_) {
            const double z_eur_raw = stream(path, ProcessTag::AssetEurZ).normal(j, 0);
            const double z_eur = negate ? antithetic_of(z_eur_raw) : z_eur_raw;
            const double dw_eur = mix_correlated(dw_gbp, sqrt_dt_ * z_eur, rho_eur0);
            st.s_eur = advance_asset(*mkt_.r_f2, v_eur0, "s_eur", st.s_eur, t, dw_eur, path, j);
        }
    }

    MarketSnapshot mkt_;
    SimConfig cfg_;
    bool case2_ = false;
    std::size_t n_steps_ = 0;
    double dt_ = 0.0;
    double sqrt_dt_ = 0.0;

    CoefficientSet sv_coeffs_;
    std::optional<JumpParams> sv_jump_;
    CoefficientSet sc_usd_coeffs_;
    CoefficientSet sc_eur_coeffs_;
    bool sc_active_ = false;
    CoefficientSet ser_gbp_coeffs_;
    std::optional<JumpParams> ser_gbp_jump_;
    CoefficientSet ser_eur_coeffs_;
    std::optional<JumpParams> ser_eur_jump_;

    PathState init_{};
};

void resize_sample(TerminalSample& sample, std::size_t n, bool case2) {
    sample.s_usd.resize(n);
    sample.s_gbp.resize(n);
    sample.fx_gbp.resize(n);
    if (case2) {
        sample.s_eur.resize(n);
        sample.fx_eur.resize(n);
    }
}

void store_terminal(TerminalSample& sample, std::size_t slot, const PathState& st, bool case2) {
    sample.s_usd[slot] = st.s_usd;
    sample.s_gbp[slot] = st.s_gbp;
    sample.fx_gbp[slot] = st.fx_gbp;
    if (case2) {
        sample.s_eur[slot] = st.s_eur;
        sample.fx_eur[slot] = st.fx_eur;
    }
}

// Runs paths [0, n) across the worker pool. Each worker owns a disjoint
// contiguous block and writes to disjoint slots, so results are independent
// of the worker count. The lowest-path failure wins when workers throw.
void run_paths(const SimKernel& kernel, std::size_t n, unsigned workers,
               const std::function<void(std::uint64_t path, const PathState& st,
                                        const PathState* twin)>& sink,
               bool with_twin) {
    const unsigned requested = std::max(1u, workers);
    const unsigned used = static_cast<unsigned>(
        std::min<std::size_t>(requested, std::max<std::size_t>(n, 1)));

    struct Failure {
        std::uint64_t path;
        std::exception_ptr error;
    };
    std::vector<std::optional<Failure>> failures(used);

    auto work = [&](unsigned w, std::size_t lo, std::size_t hi) {
        PathState st{}, twin{};
        for (std::size_t p = lo; p < hi; ++p) {
            try {
                kernel.simulate_path(p, false, st);
                if (with_twin) {
                    kernel.simulate_path(p, true, twin);
                    sink(p, st, &twin);
                } else {
                    sink(p, st, nullptr);
                }
            } catch (...) {
                failures[w] = Failure{p, std::current_exception()};
                return;
            }
        }
    };

    if (used == 1) {
        work(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(used);
        const std::size_t chunk = (n + used - 1) / used;
        for (unsigned w = 0; w < used; ++w) {
            const std::size_t lo = std::min<std::size_t>(w * chunk, n);
            const std::size_t hi = std::min<std::size_t>(lo + chunk, n);
            pool.emplace_back(work, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    const std::optional<Failure>* first = nullptr;
    for (const auto& f : failures) {
        if (f && (!first || f->path < (*first)->path)) first = &f;
    }
    if (first) std::rethrow_exception((*first)->error);
}

}  // namespace

std::string to_string(CaseTag tag) { return tag == CaseTag::Case1 ? "case1" : "case2"; }

CaseTag parse_case_tag(const std::string& name) {
    if (name == "case1") return CaseTag::Case1;
    if (name == "case2") return CaseTag::Case2;
    throw ConfigError("unknown case '" + name + "'; valid cases: case1, case2");
}

void MarketSnapshot::validate() const {
    require(s0_usd > 0.0 && s0_gbp > 0.0, "initial asset prices must be > 0");
    require(fx0_gbp > 0.0, "initial FX rates must be > 0");
    require(v0_usd > 0.0 && v0_gbp > 0.0, "initial variances must be > 0");
    require(rho0 >= -1.0 && rho0 <= 1.0, "rho0 must lie in [-1, 1]");
    if (rho0_eur) {
        require(*rho0_eur >= -1.0 && *rho0_eur <= 1.0, "rho0_eur must lie in [-1, 1]");
    }
    require(k1 > 0.0 && k2 > 0.0, "strikes must be > 0");
    require(std::isfinite(r_d) && std::isfinite(r_f1), "rates must be finite");
    const bool has_eur = s0_eur || fx0_eur || v0_eur || r_f2 || k3;
    if (case_tag == CaseTag::Case1) {
        require(!has_eur, "case1 takes exactly 2 assets, 1 rate, and 2 strikes; EUR fields must be absent");
    } else {
        require(s0_eur && fx0_eur && v0_eur && r_f2 && k3,
                "case2 requires s0_eur, fx0_eur, v0_eur, r_f2, and k3");
        require(*s0_eur > 0.0 && *fx0_eur > 0.0 && *v0_eur > 0.0 && *k3 > 0.0,
                "case2 EUR fields must be > 0");
        require(std::isfinite(*r_f2), "r_f2 must be finite");
    }
}

std::size_t SimConfig::steps() const {
    if (n_steps > 0) return n_steps;
    const double days = horizon_years * 252.0;
    return static_cast<std::size_t>(std::max(1.0, std::round(days)));
}

unsigned SimConfig::worker_count() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void SimConfig::validate() const {
    require(horizon_years > 0.0, "horizon must be > 0 years");
    require(steps() >= 1, "n_steps must be >= 1");
    require(n_paths >= 1, "n_paths must be >= 1");
    if (antithetic) {
        require(n_paths >= 2 && n_paths % 2 == 0, "antithetic runs need an even n_paths >= 2");
    }
}

TerminalSample simulate(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg) {
    const SimKernel kernel(model, mkt, cfg);
    TerminalSample out;
    resize_sample(out, cfg.n_paths, kernel.case2());
    run_paths(
        kernel, cfg.n_paths, cfg.worker_count(),
        [&](std::uint64_t path, const PathState& st, const PathState*) {
            store_terminal(out, path, st, kernel.case2());
        },
        false);
    return out;
}

PairedTerminalSample simulate_antithetic(const ModelSpec& model, const MarketSnapshot& mkt,
                                         const SimConfig& cfg) {
    if (!cfg.antithetic) {
        throw ConfigError("simulate_antithetic requires cfg.antithetic = true");
    }
    const SimKernel kernel(model, mkt, cfg);
    const std::size_t pairs = cfg.n_paths / 2;
    PairedTerminalSample out;
    resize_sample(out.original, pairs, kernel.case2());
    resize_sample(out.antithetic, pairs, kernel.case2());
    run_paths(
        kernel, pairs, cfg.worker_count(),
        [&](std::uint64_t path, const PathState& st, const PathState* twin) {
            store_terminal(out.original, path, st, kernel.case2());
            store_terminal(out.antithetic, path, *twin, kernel.case2());
        },
        true);
    return out;
}

void dump_paths_csv(const ModelSpec& model, const MarketSnapshot& mkt, const SimConfig& cfg,
                    std::ostream& out, std::size_t max_paths) {
    const SimKernel kernel(model, mkt, cfg);
    const bool case2 = kernel.case2();
    out << "path,step,t,v_usd,v_gbp";
    if (case2) out << ",v_eur";
    out << ",rho_gbp_usd";
    if (case2) out << ",rho_eur_usd";
    out << ",fx_gbp";
    if (case2) out << ",fx_eur";
    out << ",s_usd,s_gbp";
    if (case2) out << ",s_eur";
    out << "\n";

    const double dt = cfg.dt();
    char buf[64];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof(buf), ",%.10g", x);
        out << buf;
    };
    const PathRecorder recorder = [&](std::uint64_t path, std::uint64_t step,
                                      const PathState& st) {
        out << path << ',' << step;
        std::snprintf(buf, sizeof(buf), ",%.10g", static_cast<double>(step) * dt);
        out << buf;
        put(st.v_usd);
        put(st.v_gbp);
        if (case2) put(st.v_eur);
        put(st.rho_usd);
        if (case2) put(st.rho_eur);
        put(st.fx_gbp);
        if (case2) put(st.fx_eur);
        put(st.s_usd);
        put(st.s_gbp);
        if (case2) put(st.s_eur);
        out << "\n";
    };

    const std::size_t n = std::min<std::size_t>(max_paths, cfg.n_paths);
    PathState st{};
    for (std::size_t p = 0; p < n; ++p) {
        kernel.simulate_path(p, false, st, &recorder);
    }
}

}  // namespace qmc
