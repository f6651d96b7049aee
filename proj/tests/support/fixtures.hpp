#pragma once

// Shared model/market setups for the test suites.

#include "quantomc/models.hpp"
#include "quantomc/engine.hpp"

namespace fixtures {

inline qmc::MarketSnapshot market_case1() {
    qmc::MarketSnapshot mkt;
    mkt.case_tag = qmc::CaseTag::Case1;
    mkt.s0_usd = 100.0;
    mkt.s0_gbp = 80.0;
    mkt.fx0_gbp = 1.25;
    mkt.v0_usd = 0.04;
    mkt.v0_gbp = 0.04;
    mkt.rho0 = 0.5;
    mkt.r_d = 0.03;
    mkt.r_f1 = 0.02;
    mkt.k1 = 100.0;
    mkt.k2 = 100.0;
    return mkt;
}

inline qmc::MarketSnapshot market_case2() {
    qmc::MarketSnapshot mkt = market_case1();
    mkt.case_tag = qmc::CaseTag::Case2;
    mkt.s0_eur = 120.0;
    mkt.fx0_eur = 1.1;
    mkt.v0_eur = 0.05;
    mkt.r_f2 = 0.025;
    mkt.k3 = 132.0;
    return mkt;
}

// Frozen volatilities (sigma = 0, v0 = theta), constant correlation, and a
// deterministic FX rate: every terminal law is known in closed form.
inline qmc::ModelSpec degenerate_model(double fx_sigma = 0.0) {
    qmc::ModelSpec model;
    model.sv.variant = qmc::SvTag::Heston;
    model.sv.kappa = 2.0;
    model.sv.theta = 0.04;
    model.sv.sigma = 0.0;
    model.sc = qmc::ScParams::constant(0.0);
    model.ser.variant = qmc::SerTag::Gbm;
    model.ser.sigma_fx = fx_sigma;
    return model;
}

inline qmc::MarketSnapshot degenerate_market_case1(double rho = 0.0) {
    qmc::MarketSnapshot mkt = market_case1();
    mkt.v0_usd = 0.04;  // = theta, so the variance stays put
    mkt.v0_gbp = 0.04;
    mkt.rho0 = rho;
    return mkt;
}

// Fully populated base spec for sweeps: every variant the harness stamps can
// draw its parameters from here.
inline qmc::ModelSpec sweep_base_model() {
    qmc::ModelSpec model;
    model.sv.variant = qmc::SvTag::GarchJump;
    model.sv.kappa = 2.0;
    model.sv.theta = 0.04;
    model.sv.sigma = 1.0;  // GARCH scale: diffusion sigma * v
    model.sv.omega32 = 2.0;
    model.sv.zeta = 1.0;
    model.sv.jump = qmc::JumpParams{4.0, 0.02, 0.01};

    model.sc.variant = qmc::ScTag::Weibull;
    model.sc.kappa = 2.0;
    model.sc.rho_bar = 0.5;
    model.sc.sigma = 0.3;
    model.sc.h = 0.9;
    model.sc.f = -0.9;
    model.sc.alpha = 2.0;
    model.sc.lambda_w = 0.6;
    model.sc.k_w = 2.0;

    model.ser.variant = qmc::SerTag::Ou;
    model.ser.sigma_fx = 0.08;
    model.ser.theta_ou = 1.5;
    model.ser.mu_ou = 1.25;
    model.ser.jump = qmc::JumpParams{10.0, 0.0, 0.005};
    return model;
}

inline qmc::ModelSpec sweep_base_model_case2() {
    qmc::ModelSpec model = sweep_base_model();
    model.ser_eur = model.ser;
    model.ser_eur->mu_ou = 1.1;
    return model;
}

}  // namespace fixtures
