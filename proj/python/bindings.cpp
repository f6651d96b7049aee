#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quantomc/calibration.hpp"
#include "quantomc/errors.hpp"
#include "quantomc/greeks.hpp"
#include "quantomc/harness.hpp"
#include "quantomc/special_functions.hpp"
#include "quantomc/version.hpp"

namespace py = pybind11;
using namespace qmc;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monte Carlo pricer for multi-asset quanto basket calls";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "QmcError", PyExc_RuntimeError);

    py::enum_<SvTag>(m, "SvTag")
        .value("HESTON", SvTag::Heston)
        .value("GARCH", SvTag::Garch)
        .value("GARCH_JUMP", SvTag::GarchJump)
        .value("BATES", SvTag::Bates)
        .value("THREE_HALVES", SvTag::ThreeHalves);
    py::enum_<ScTag>(m, "ScTag")
        .value("WRIGHT_FISHER", ScTag::WrightFisher)
        .value("JACOBI", ScTag::Jacobi)
        .value("MEAN_REVERTING", ScTag::MeanReverting)
        .value("WEIBULL", ScTag::Weibull)
        .value("CONSTANT", ScTag::Constant);
    py::enum_<SerTag>(m, "SerTag")
        .value("GBM", SerTag::Gbm)
        .value("OU", SerTag::Ou)
        .value("EXP_LEVY", SerTag::ExpLevy);
    py::enum_<SchemeChoice>(m, "Scheme")
        .value("EULER", SchemeChoice::Euler)
        .value("MILSTEIN", SchemeChoice::Milstein)
        .value("RUNGE_KUTTA", SchemeChoice::RungeKutta);
    py::enum_<CaseTag>(m, "Case")
        .value("CASE1", CaseTag::Case1)
        .value("CASE2", CaseTag::Case2);
    py::enum_<BumpMode>(m, "BumpMode")
        .value("INITIAL_ONLY", BumpMode::InitialOnly)
        .value("PARALLEL_SHIFT", BumpMode::ParallelShift);
    py::enum_<CorrPair>(m, "CorrPair")
        .value("GBP_USD", CorrPair::GbpUsd)
        .value("EUR_USD", CorrPair::EurUsd);
    py::enum_<SweepKind>(m, "SweepKind")
        .value("STOCHASTIC_CORR", SweepKind::StochasticCorr)
        .value("CONSTANT_CORR", SweepKind::ConstantCorr);

    py::class_<JumpParams>(m, "JumpParams")
        .def(py::init<double, double, double>(), py::arg("lam") = 0.0, py::arg("mu_j") = 0.0,
             py::arg("sigma_j") = 0.0)
        .def_readwrite("lam", &JumpParams::lambda)
        .def_readwrite("mu_j", &JumpParams::mu_j)
        .def_readwrite("sigma_j", &JumpParams::sigma_j);

    py::class_<SvParams>(m, "SvParams")
        .def(py::init<>())
        .def_readwrite("variant", &SvParams::variant)
        .def_readwrite("kappa", &SvParams::kappa)
        .def_readwrite("theta", &SvParams::theta)
        .def_readwrite("sigma", &SvParams::sigma)
        .def_readwrite("omega32", &SvParams::omega32)
        .def_readwrite("jump", &SvParams::jump)
        .def_readwrite("zeta", &SvParams::zeta)
        .def("feller_satisfied", &SvParams::feller_satisfied);

    py::class_<ScParams>(m, "ScParams")
        .def(py::init<>())
        .def_static("constant", &ScParams::constant, py::arg("rho"))
        .def_readwrite("variant", &ScParams::variant)
        .def_readwrite("kappa", &ScParams::kappa)
        .def_readwrite("rho_bar", &ScParams::rho_bar)
        .def_readwrite("sigma", &ScParams::sigma)
        .def_readwrite("h", &ScParams::h)
        .def_readwrite("f", &ScParams::f)
        .def_readwrite("alpha", &ScParams::alpha)
        .def_readwrite("lambda_w", &ScParams::lambda_w)
        .def_readwrite("k_w", &ScParams::k_w)
        .def_readwrite("rho_const", &ScParams::rho_const)
        .def_readwrite("weibull_sqrt_diffusion", &ScParams::weibull_sqrt_diffusion);

    py::class_<SerParams>(m, "SerParams")
        .def(py::init<>())
        .def_readwrite("variant", &SerParams::variant)
        .def_readwrite("sigma_fx", &SerParams::sigma_fx)
        .def_readwrite("theta_ou", &SerParams::theta_ou)
        .def_readwrite("mu_ou", &SerParams::mu_ou)
        .def_readwrite("jump", &SerParams::jump)
        .def_readwrite("r_f", &SerParams::r_f)
        .def_readwrite("r_d", &SerParams::r_d);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("sv", &ModelSpec::sv)
        .def_readwrite("sc", &ModelSpec::sc)
        .def_readwrite("sc_eur", &ModelSpec::sc_eur)
        .def_readwrite("ser", &ModelSpec::ser)
        .def_readwrite("ser_eur", &ModelSpec::ser_eur)
        .def("validate", &ModelSpec::validate);

    py::class_<MarketSnapshot>(m, "MarketSnapshot")
        .def(py::init<>())
        .def_readwrite("case_tag", &MarketSnapshot::case_tag)
        .def_readwrite("s0_usd", &MarketSnapshot::s0_usd)
        .def_readwrite("s0_gbp", &MarketSnapshot::s0_gbp)
        .def_readwrite("s0_eur", &MarketSnapshot::s0_eur)
        .def_readwrite("fx0_gbp", &MarketSnapshot::fx0_gbp)
        .def_readwrite("fx0_eur", &MarketSnapshot::fx0_eur)
        .def_readwrite("v0_usd", &MarketSnapshot::v0_usd)
        .def_readwrite("v0_gbp", &MarketSnapshot::v0_gbp)
        .def_readwrite("v0_eur", &MarketSnapshot::v0_eur)
        .def_readwrite("rho0", &MarketSnapshot::rho0)
        .def_readwrite("rho0_eur", &MarketSnapshot::rho0_eur)
        .def_readwrite("r_d", &MarketSnapshot::r_d)
        .def_readwrite("r_f1", &MarketSnapshot::r_f1)
        .def_readwrite("r_f2", &MarketSnapshot::r_f2)
        .def_readwrite("k1", &MarketSnapshot::k1)
        .def_readwrite("k2", &MarketSnapshot::k2)
        .def_readwrite("k3", &MarketSnapshot::k3)
        .def("validate", &MarketSnapshot::validate);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &SimConfig::n_paths)
        .def_readwrite("horizon_years", &SimConfig::horizon_years)
        .def_readwrite("n_steps", &SimConfig::n_steps)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("scheme", &SimConfig::scheme)
        .def_readwrite("antithetic", &SimConfig::antithetic)
        .def_readwrite("workers", &SimConfig::workers)
        .def("steps", &SimConfig::steps)
        .def("dt", &SimConfig::dt);

    py::class_<TerminalSample>(m, "TerminalSample")
        .def_readonly("s_usd", &TerminalSample::s_usd)
        .def_readonly("s_gbp", &TerminalSample::s_gbp)
        .def_readonly("s_eur", &TerminalSample::s_eur)
        .def_readonly("fx_gbp", &TerminalSample::fx_gbp)
        .def_readonly("fx_eur", &TerminalSample::fx_eur)
        .def("__len__", &TerminalSample::size);

    py::class_<PriceReport>(m, "PriceReport")
        .def_readonly("price", &PriceReport::price)
        .def_readonly("std_error", &PriceReport::std_error)
        .def_readonly("ci_low", &PriceReport::ci_low)
        .def_readonly("ci_high", &PriceReport::ci_high)
        .def_readonly("payoff_stdev", &PriceReport::payoff_stdev)
        .def_readonly("n_effective", &PriceReport::n_effective)
        .def_readonly("elapsed_seconds", &PriceReport::elapsed_seconds)
        .def_readonly("pair_covariance", &PriceReport::pair_covariance)
        .def("__repr__", [](const PriceReport& r) {
            return "<PriceReport price=" + std::to_string(r.price) +
                   " stderr=" + std::to_string(r.std_error) + ">";
        });

    py::class_<CorrBumpSpec>(m, "CorrBumpSpec")
        .def(py::init<>())
        .def_readwrite("h", &CorrBumpSpec::h)
        .def_readwrite("mode", &CorrBumpSpec::mode)
        .def_readwrite("pair", &CorrBumpSpec::pair);

    py::class_<GreekReport>(m, "GreekReport")
        .def_readonly("cora", &GreekReport::cora)
        .def_readonly("cora_se", &GreekReport::cora_se)
        .def_readonly("gora", &GreekReport::gora)
        .def_readonly("gora_se", &GreekReport::gora_se)
        .def_readonly("h_used", &GreekReport::h_used)
        .def_readonly("base", &GreekReport::base)
        .def_readonly("up", &GreekReport::up)
        .def_readonly("down", &GreekReport::down);

    py::class_<VariantId>(m, "VariantId")
        .def_readonly("sv", &VariantId::sv)
        .def_readonly("sc", &VariantId::sc)
        .def_readonly("ser", &VariantId::ser)
        .def_readonly("scheme", &VariantId::scheme)
        .def("label", &VariantId::label);

    py::class_<VariantRow>(m, "VariantRow")
        .def_readonly("id", &VariantRow::id)
        .def_readonly("report", &VariantRow::report)
        .def_readonly("status", &VariantRow::status)
        .def_readonly("pct_error", &VariantRow::pct_error)
        .def_readonly("rank_se", &VariantRow::rank_se)
        .def_readonly("rank_pe", &VariantRow::rank_pe)
        .def_readonly("top30", &VariantRow::top30)
        .def("ok", &VariantRow::ok);

    py::class_<VariantTable>(m, "VariantTable")
        .def_readonly("rows", &VariantTable::rows)
        .def_readonly("target", &VariantTable::target)
        .def_readonly("degraded_target", &VariantTable::degraded_target);

    py::class_<MergedReport>(m, "MergedReport")
        .def_readonly("target", &MergedReport::target)
        .def_readonly("best_const_placement", &MergedReport::best_const_placement);

    py::class_<HistorySeries>(m, "HistorySeries")
        .def_readonly("instrument", &HistorySeries::instrument)
        .def_readonly("dates", &HistorySeries::dates)
        .def_readonly("closes", &HistorySeries::closes)
        .def_readonly("was_unsorted", &HistorySeries::was_unsorted)
        .def_readonly("dropped_rows", &HistorySeries::dropped_rows)
        .def("__len__", &HistorySeries::size);

    py::class_<CalibrationWindow>(m, "CalibrationWindow")
        .def(py::init<>())
        .def_readwrite("as_of", &CalibrationWindow::as_of)
        .def_readwrite("lookback", &CalibrationWindow::lookback)
        .def_readwrite("rolling", &CalibrationWindow::rolling);

    py::class_<RateConstants>(m, "RateConstants")
        .def(py::init<>())
        .def_readwrite("r_d", &RateConstants::r_d)
        .def_readwrite("r_f1", &RateConstants::r_f1)
        .def_readwrite("r_f2", &RateConstants::r_f2);

    py::class_<CalibratedInputs>(m, "CalibratedInputs")
        .def_readonly("market", &CalibratedInputs::market)
        .def_readonly("model", &CalibratedInputs::model)
        .def_readonly("notes", &CalibratedInputs::notes);

    m.def("simulate", &simulate, py::arg("model"), py::arg("market"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("price_model", &price_model, py::arg("model"), py::arg("market"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Simulate and price one model variant; wall-clock time is stamped on the report.");
    m.def("corr_greeks", &corr_greeks, py::arg("model"), py::arg("market"), py::arg("config"),
          py::arg("bump") = CorrBumpSpec{}, py::call_guard<py::gil_scoped_release>(),
          "Central-difference Cora/Gora under common random numbers.");
    m.def("run_sweep", &run_sweep, py::arg("base_model"), py::arg("market"), py::arg("config"),
          py::arg("kind") = SweepKind::StochasticCorr,
          py::call_guard<py::gil_scoped_release>());
    m.def("merge_benchmark", &merge_benchmark, py::arg("sc_table"), py::arg("const_table"));
    m.def("payoff_case1", &payoff_case1, py::arg("s_usd"), py::arg("s_gbp"), py::arg("fx"),
          py::arg("k1"), py::arg("k2"));
    m.def("payoff_case2", &payoff_case2, py::arg("s_usd"), py::arg("s_gbp"), py::arg("s_eur"),
          py::arg("fx_gbp"), py::arg("fx_eur"), py::arg("k1"), py::arg("k2"), py::arg("k3"));
    m.def("ingest_csv", &ingest_csv, py::arg("path"));
    m.def("build_market_snapshot", &build_market_snapshot, py::arg("series"), py::arg("window"),
          py::arg("case_tag"), py::arg("rates"));
    m.def("upper_incomplete_gamma", &upper_incomplete_gamma, py::arg("a"), py::arg("x"));
    m.def("norm_ppf", &norm_ppf, py::arg("p"));
    m.def("weibull_mean", &weibull_mean, py::arg("lam"), py::arg("k"));
}
