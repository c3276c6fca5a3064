"""Descriptive moments, normality and unit-root tests, correlations, box stats.

These are the building blocks of the summary table and heatmaps the pipeline
emits for a return panel: per-series moments with a Jarque-Bera normality
verdict, augmented Dickey-Fuller stationarity checks, the Pearson correlation
matrix, and box-plot statistics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from . import mackinnon
from ._linalg import gaussian_aic, qr_lstsq
from .errors import (
    DegenerateVarianceError,
    NonFiniteValueError,
    TooFewObservationsError,
    ZeroVarianceError,
)
from .panel import Panel


@dataclass(frozen=True)
class Moments:
    """First four moments of a sample.

    Variance is the unbiased (n-1) estimator; skewness and excess kurtosis
    use central moments with 1/n normalization, the same quantities the
    Jarque-Bera statistic consumes.
    """

    n: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float


@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test at the 5% reference level."""

    test_name: str
    statistic: float
    p_value: float
    nuisance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    @property
    def reject_at_5pct(self) -> bool:
        return self.p_value < 0.05

    def to_dict(self) -> dict:
        return {
            "test_name": self.test_name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject_at_5pct": self.reject_at_5pct,
            "nuisance": dict(self.nuisance),
        }


@dataclass(frozen=True)
class BoxStats:
    """Box-plot summary: quartiles, fence whiskers, and outliers."""

    q1: float
    median: float
    q3: float
    iqr: float
    lower_whisker: float
    upper_whisker: float
    outliers: tuple


def _check_series(series, min_n: int, what: str) -> np.ndarray:
    x = np.asarray(series, dtype=float).ravel()
    if x.size < min_n:
        raise TooFewObservationsError(
            f"{what} needs at least {min_n} observations, got {x.size}"
        )
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError(f"{what} input contains non-finite values")
    return x


def moments(series) -> Moments:
    """Mean, unbiased variance, skewness, and excess kurtosis of a series."""
    x = _check_series(series, 4, "moments")
    n = x.size
    mean = float(np.mean(x))
    centered = x - mean
    m2 = float(np.mean(centered ** 2))
    if m2 == 0.0:
        raise DegenerateVarianceError(
            "sample is constant; skewness and kurtosis are undefined"
        )
    m3 = float(np.mean(centered ** 3))
    m4 = float(np.mean(centered ** 4))
    variance = float(np.sum(centered ** 2) / (n - 1))
    skewness = m3 / m2 ** 1.5
    excess_kurtosis = m4 / m2 ** 2 - 3.0
    return Moments(n, mean, variance, skewness, excess_kurtosis)


def jarque_bera(series) -> TestReport:
    """Jarque-Bera normality test: n/6 (S^2 + K^2/4) against chi-square(2)."""
    x = _check_series(series, 20, "jarque_bera")
    m = moments(x)
    stat = m.n / 6.0 * (m.skewness ** 2 + m.excess_kurtosis ** 2 / 4.0)
    p = float(chi2.sf(stat, df=2))
    return TestReport("jarque_bera", stat, p, {"n": m.n})


class AdfSpec(enum.Enum):
    """Deterministic terms included in the Dickey-Fuller regression."""

    CONSTANT_ONLY = "constant"
    CONSTANT_TREND = "constant_trend"


def default_adf_max_lags(n: int) -> int:
    """Schwert-style rule floor(12 (n/100)^{1/4}) used for automatic lag caps."""
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def _adf_design(y: np.ndarray, k: int, trim: int, deterministic: str):
    """Dickey-Fuller regression pieces for lag order k.

    Observations start at index trim+1 of the level series so competing lag
    orders (k <= trim) can be compared on an identical sample.  Column 0 of
    the design is the lagged level; its t-statistic is the test statistic.
    """
    dy = np.diff(y)
    rows = dy.size - trim
    lhs = dy[trim:]
    cols = [y[trim:-1]]
    for i in range(1, k + 1):
        cols.append(dy[trim - i:dy.size - i])
    if deterministic in ("constant", "constant_trend"):
        cols.append(np.ones(rows))
    if deterministic == "constant_trend":
        cols.append(np.arange(1, rows + 1, dtype=float))
    return lhs, np.column_stack(cols)


def _adf_tau(y: np.ndarray, k: int, deterministic: str) -> float:
    lhs, design = _adf_design(y, k, trim=k, deterministic=deterministic)
    beta, _, ssr, xtx_inv = qr_lstsq(lhs, design)
    dof = lhs.size - design.shape[1]
    sigma2 = ssr / dof
    return float(beta[0] / math.sqrt(sigma2 * xtx_inv[0, 0]))


def adf_regression(y: np.ndarray, deterministic: str,
                   max_lags: int | None = None) -> tuple[float, int]:
    """Tau statistic of the augmented Dickey-Fuller regression.

    Lag order is selected by Gaussian AIC over 0..max_lags, with competing
    orders compared on the common (maximally trimmed) sample, and the chosen
    order refitted on its full sample.  Returns (tau, chosen_lag).
    """
    n = y.size
    if max_lags is None:
        max_lags = default_adf_max_lags(n)
    # keep enough residual degrees of freedom at the largest candidate
    hard_cap = max(0, (n - 12) // 2)
    max_lags = max(0, min(max_lags, hard_cap))

    best_k, best_aic = 0, np.inf
    for k in range(max_lags + 1):
        lhs, design = _adf_design(y, k, trim=max_lags, deterministic=deterministic)
        _, _, ssr, _ = qr_lstsq(lhs, design)
        aic = gaussian_aic(ssr, lhs.size, design.shape[1])
        if aic < best_aic:
            best_k, best_aic = k, aic
    return _adf_tau(y, best_k, deterministic), best_k


def adf(series, spec: AdfSpec = AdfSpec.CONSTANT_ONLY,
        max_lags: int | None = None) -> TestReport:
    """Augmented Dickey-Fuller unit-root test.

    Fits d y_t = c (+ d t) + g y_{t-1} + sum_i phi_i d y_{t-i} + e_t and
    reports the t-statistic of g with its response-surface p-value.  The lag
    count is chosen by AIC over 0..max_lags (default cap:
    floor(12 (n/100)^{1/4})).
    """
    x = _check_series(series, 25, "adf")
    deterministic = spec.value
    tau, k = adf_regression(x, deterministic, max_lags)
    p = mackinnon.tau_pvalue(tau, spec=deterministic, n_series=1)
    return TestReport("adf", tau, p, {"lags": k, "spec": deterministic})


def pearson_matrix(panel: Panel) -> np.ndarray:
    """Pearson correlation matrix of the panel columns.

    Symmetric with an exact unit diagonal; raises ZeroVariance for any
    constant column.
    """
    if panel.n_cols < 2:
        raise ValueError("pearson_matrix needs at least 2 columns")
    if panel.n_rows < 3:
        raise TooFewObservationsError("pearson_matrix needs at least 3 rows")
    values = panel.values
    centered = values - values.mean(axis=0)
    norms = np.sqrt(np.sum(centered ** 2, axis=0))
    for name, s in zip(panel.names, norms):
        if s == 0.0:
            raise ZeroVarianceError(f"column {name!r} is constant")
    k = panel.n_cols
    corr = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            c = float(centered[:, i] @ centered[:, j] / (norms[i] * norms[j]))
            corr[i, j] = corr[j, i] = min(1.0, max(-1.0, c))
    return corr


def box_stats(series) -> BoxStats:
    """Box-plot statistics with 1.5 IQR fences.

    Quartiles use linear interpolation of order statistics; whiskers are the
    1.5 IQR fences clipped to the observed data range; outliers are the
    values beyond the fences.
    """
    x = _check_series(series, 5, "box_stats")
    q1, median, q3 = (float(q) for q in np.percentile(x, [25.0, 50.0, 75.0]))
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    lower_whisker = max(float(np.min(x)), lo_fence)
    upper_whisker = min(float(np.max(x)), hi_fence)
    outliers = tuple(float(v) for v in np.sort(x[(x < lo_fence) | (x > hi_fence)]))
    return BoxStats(q1, median, q3, iqr, lower_whisker, upper_whisker, outliers)
