"""Pairwise long-run equilibrium and lead-lag tests across a panel.

Two residual-based tools: the two-step Engle-Granger cointegration test for
price levels, and the Granger causality F-test for returns.  Both come with a
matrix builder that applies the test to every pair of panel columns and emits
the p-value grid the pipeline plots as a heatmap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import f as f_dist

from . import mackinnon
from ._linalg import qr_lstsq
from .errors import TooFewObservationsError
from .panel import Panel
from .stats import TestReport, adf_regression


@dataclass(frozen=True)
class PairMatrix:
    """Square grid of pairwise p-values with an N/A diagonal.

    For causality matrices the entry (i, j) tests "row i causes column j";
    cointegration matrices are symmetric and unordered.
    """

    names: tuple
    p_values: np.ndarray
    direction_convention: str

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        values = np.array(self.p_values, dtype=float)
        k = len(self.names)
        if values.shape != (k, k):
            raise ValueError(f"p-value matrix must be {k}x{k}")
        values.flags.writeable = False
        object.__setattr__(self, "p_values", values)


def engle_granger(y, x, max_lags: int | None = None) -> TestReport:
    """Two-step Engle-Granger cointegration test.

    Step 1 regresses y on x with an intercept; step 2 runs an augmented
    Dickey-Fuller regression on the residuals with no deterministic terms
    (they are mean zero by construction).  The p-value comes from the
    two-variable cointegration response surface for a constant-only
    cointegrating regression.
    """
    y = np.asarray(y, dtype=float).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if y.size != x.size:
        raise ValueError("series must have equal length")
    if y.size < 50:
        raise TooFewObservationsError(
            f"engle_granger needs at least 50 observations, got {y.size}"
        )
    design = np.column_stack([np.ones(x.size), x])
    _, resid, _, _ = qr_lstsq(y, design)
    tau, k = adf_regression(resid, deterministic="none", max_lags=max_lags)
    p = mackinnon.tau_pvalue(tau, spec="constant", n_series=2)
    return TestReport("engle_granger", tau, p, {"adf_lags": k})


def coint_matrix(panel: Panel, max_lags: int | None = None,
                 both_directions: bool = False) -> PairMatrix:
    """Engle-Granger p-value matrix over all column pairs.

    By convention the lower-index series is the dependent variable; with
    ``both_directions`` the test runs both ways and the minimum p-value is
    reported (the convention is recorded on the result).
    """
    if panel.n_cols < 2:
        raise ValueError("coint_matrix needs at least 2 columns")
    k = panel.n_cols
    grid = np.full((k, k), np.nan)
    for i in range(k):
        for j in range(i + 1, k):
            p = engle_granger(panel.values[:, i], panel.values[:, j], max_lags).p_value
            if both_directions:
                p_rev = engle_granger(panel.values[:, j], panel.values[:, i],
                                      max_lags).p_value
                p = min(p, p_rev)
            grid[i, j] = grid[j, i] = p
    convention = ("unordered pair, minimum p over both directions"
                  if both_directions else
                  "unordered pair, dependent variable = lower column index")
    return PairMatrix(panel.names, grid, convention)


def granger(cause, effect, lags: int = 1) -> TestReport:
    """Granger causality F-test of ``cause`` on ``effect``.

    The restricted model regresses effect_t on its own ``lags`` lags (plus a
    constant); the unrestricted model adds the same number of lags of the
    cause.  The statistic is the standard SSR-based F with
    (lags, n - 2 lags - 1) degrees of freedom, where n counts the usable
    observations after lagging.
    """
    cause = np.asarray(cause, dtype=float).ravel()
    effect = np.asarray(effect, dtype=float).ravel()
    if cause.size != effect.size:
        raise ValueError("series must have equal length")
    if lags < 1:
        raise ValueError("lags must be >= 1")
    if cause.size <= 3 * lags + 2:
        raise TooFewObservationsError(
            f"granger with {lags} lags needs more than {3 * lags + 2} "
            f"observations, got {cause.size}"
        )

    lhs = effect[lags:]
    n = lhs.size
    own = np.column_stack([effect[lags - i:effect.size - i] for i in range(1, lags + 1)])
    other = np.column_stack([cause[lags - i:cause.size - i] for i in range(1, lags + 1)])
    const = np.ones((n, 1))

    _, _, ssr_r, _ = qr_lstsq(lhs, np.hstack([const, own]))
    _, _, ssr_u, _ = qr_lstsq(lhs, np.hstack([const, own, other]))

    dof = n - 2 * lags - 1
    if dof <= 0:
        raise TooFewObservationsError("no residual degrees of freedom")
    stat = max(0.0, (ssr_r - ssr_u) / lags / (ssr_u / dof))
    p = float(f_dist.sf(stat, lags, dof))
    return TestReport("granger", stat, p, {"lags": lags, "dof": dof})


def granger_matrix(panel: Panel, lags: int = 1) -> PairMatrix:
    """Pairwise Granger causality p-values: entry (i, j) tests column i -> j."""
    if panel.n_cols < 2:
        raise ValueError("granger_matrix needs at least 2 columns")
    k = panel.n_cols
    grid = np.full((k, k), np.nan)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            grid[i, j] = granger(panel.values[:, i], panel.values[:, j], lags).p_value
    return PairMatrix(panel.names, grid, "row causes column")
