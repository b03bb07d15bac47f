from ._hpca import (
    AssetMeta,
    BacktestResult,
    EigenSystem,
    Error,
    NumericalError,
    PricePanel,
    StandardizedPanel,
    ValidationError,
    backtest,
    build_hpca,
    correlation_matrix,
    diversity_level,
    eigendecompose,
    erank,
    explained_variance,
    generate_synthetic,
    load_meta,
    load_prices,
    make_price_panel,
    max_sharpe,
    partition_labels,
    perf_stats,
    select_k,
    sign_clusters,
    standardize,
    standardize_returns,
    truncate_model,
    verify_gaussian,
)

__all__ = [name for name in dir() if not name.startswith("_")]
