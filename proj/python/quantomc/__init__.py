"""Monte Carlo pricer for multi-asset quanto basket calls."""

from ._core import (  # noqa: F401
    BumpMode,
    CalibratedInputs,
    CalibrationWindow,
    Case,
    CorrBumpSpec,
    CorrPair,
    GreekReport,
    HistorySeries,
    JumpParams,
    MarketSnapshot,
    MergedReport,
    ModelSpec,
    PriceReport,
    QmcError,
    RateConstants,
    ScParams,
    ScTag,
    Scheme,
    SerParams,
    SerTag,
    SimConfig,
    SvParams,
    SvTag,
    SweepKind,
    TerminalSample,
    VariantId,
    VariantRow,
    VariantTable,
    __version__,
    build_market_snapshot,
    corr_greeks,
    ingest_csv,
    merge_benchmark,
    norm_ppf,
    payoff_case1,
    payoff_case2,
    price_model,
    run_sweep,
    simulate,
    upper_incomplete_gamma,
    weibull_mean,
)
