"""Python bindings for the nid pipeline core."""

from ._nid import (
    DataError,
    NumericalError,
    UsageError,
    adaptive_trend,
    compute_signals,
    detect,
    fit_lda,
    generate,
    jsd,
    kld,
    ols_fit,
)

__all__ = [
    "DataError",
    "NumericalError",
    "UsageError",
    "adaptive_trend",
    "compute_signals",
    "detect",
    "fit_lda",
    "generate",
    "jsd",
    "kld",
    "ols_fit",
]
