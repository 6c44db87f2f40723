"""Monthly trademark/patent filing series: outliers, descriptives, wavelet
coherence, structural breaks and cointegration."""

from ._core import (
    IpseriesError,
    __version__,
    analyze,
    ar1_fit,
    breakpoints,
    cross_wavelet,
    decompose,
    detect_outliers,
    efp,
    johansen,
    ndiffs,
    phillips_ouliaris,
    rank_correlation,
    read_csv,
    summary_stats,
    unit_root_test,
)

__all__ = [
    "IpseriesError",
    "__version__",
    "analyze",
    "ar1_fit",
    "breakpoints",
    "cross_wavelet",
    "decompose",
    "detect_outliers",
    "efp",
    "johansen",
    "ndiffs",
    "phillips_ouliaris",
    "rank_correlation",
    "read_csv",
    "summary_stats",
    "unit_root_test",
]
