"""Ordinary least squares with the standard diagnostic battery.

One fit produces coefficients, non-robust standard errors, t/p values, 95%
confidence intervals, R-squared measures, the joint F-test, Durbin-Watson,
and a Jarque-Bera check on the residuals, mirroring the columns of a classic
regression summary table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import f as f_dist
from scipy.stats import t as t_dist

from ._linalg import qr_lstsq
from .errors import (
    DegenerateVarianceError,
    DimensionMismatchError,
    RankDeficientError,
    SingularRegressionError,
    TooFewObservationsError,
    ZeroResidualsError,
)
from .panel import Panel
from .stats import TestReport, jarque_bera


@dataclass(frozen=True)
class OlsFit:
    """Full output of one least-squares regression.

    Coefficient-wise arrays are ordered with the intercept first (when one
    was requested).  ``f_statistic`` is None for an intercept-only model and
    ``durbin_watson``/``residual_jb`` are None when the residuals are
    degenerate (all zero, or too few for the normality test).
    """

    names: tuple
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    conf_intervals: np.ndarray  # (k, 2)
    r_squared: float
    adj_r_squared: float
    f_statistic: float | None
    f_p_value: float | None
    residuals: np.ndarray
    fitted: np.ndarray
    durbin_watson: float | None
    residual_jb: TestReport | None
    n: int
    k: int
    has_intercept: bool

    def to_dict(self) -> dict:
        rows = []
        for i, name in enumerate(self.names):
            rows.append({
                "variable": name,
                "coeff": float(self.coefficients[i]),
                "std_err": float(self.standard_errors[i]),
                "t": float(self.t_stats[i]),
                "p": float(self.p_values[i]),
                "ci_low": float(self.conf_intervals[i, 0]),
                "ci_high": float(self.conf_intervals[i, 1]),
            })
        return {
            "rows": rows,
            "footer": {
                "n": self.n,
                "k": self.k,
                "r_squared": self.r_squared,
                "adj_r_squared": self.adj_r_squared,
                "f_statistic": self.f_statistic,
                "f_p_value": self.f_p_value,
                "durbin_watson": self.durbin_watson,
                "residual_jb_statistic":
                    None if self.residual_jb is None else self.residual_jb.statistic,
                "residual_jb_p":
                    None if self.residual_jb is None else self.residual_jb.p_value,
            },
        }


def durbin_watson(residuals) -> float:
    """First-order autocorrelation diagnostic sum (e_t - e_{t-1})^2 / sum e_t^2."""
    e = np.asarray(residuals, dtype=float).ravel()
    if e.size < 3:
        raise TooFewObservationsError("durbin_watson needs at least 3 residuals")
    denom = float(e @ e)
    if denom == 0.0:
        raise ZeroResidualsError("all residuals are zero; DW is undefined")
    return float(np.sum(np.diff(e) ** 2) / denom)


def fit(y, X, intercept: bool = True, names=None) -> OlsFit:
    """Least-squares fit of y on the columns of X.

    The solution comes from a QR factorization (never an explicit normal-
    equation inverse); standard errors use the non-robust s^2 (X'X)^{-1}
    diagonal; the F-statistic tests all non-intercept slopes jointly zero.
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != y.size:
        raise DimensionMismatchError(
            f"y has {y.size} rows but X has {X.shape[0]}"
        )
    n, m = X.shape
    if n <= m + 1:
        raise TooFewObservationsError(
            f"need more than {m + 1} observations for {m} regressors, got {n}"
        )

    if names is None:
        names = [f"x{i + 1}" for i in range(m)]
    names = list(names)
    if len(names) != m:
        raise DimensionMismatchError("one name per regressor column required")
    if intercept:
        design = np.column_stack([np.ones(n), X])
        names = ["const", *names]
    else:
        design = X
    k = design.shape[1]

    try:
        beta, resid, ssr, xtx_inv = qr_lstsq(y, design)
    except SingularRegressionError as exc:
        raise RankDeficientError(str(exc)) from None

    dof = n - k
    sigma2 = ssr / dof
    se = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se > 0, beta / se,
                           np.where(beta == 0, 0.0, np.copysign(np.inf, beta)))
    p_values = np.where(np.isinf(t_stats), 0.0,
                        2.0 * t_dist.sf(np.abs(t_stats), dof))
    t_crit = float(t_dist.ppf(0.975, dof))
    conf = np.column_stack([beta - t_crit * se, beta + t_crit * se])

    fitted = design @ beta
    if intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    if tss > 0:
        r2 = 1.0 - ssr / tss
    else:
        r2 = 1.0 if ssr <= 0 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / dof if dof > 0 else r2

    n_slopes = k - 1 if intercept else k
    if n_slopes >= 1:
        explained = tss - ssr
        if ssr > 0:
            f_stat = (explained / n_slopes) / (ssr / dof)
            f_p = float(f_dist.sf(max(f_stat, 0.0), n_slopes, dof))
        else:
            f_stat, f_p = math.inf, 0.0
    else:
        f_stat, f_p = None, None

    try:
        dw = durbin_watson(resid)
    except (ZeroResidualsError, TooFewObservationsError):
        dw = None
    try:
        resid_jb = jarque_bera(resid) if n >= 20 else None
    except DegenerateVarianceError:
        resid_jb = None

    return OlsFit(tuple(names), beta, se, t_stats, np.asarray(p_values, dtype=float),
                  conf, float(r2), float(adj_r2), f_stat, f_p, resid, fitted,
                  dw, resid_jb, n, k, intercept)


def fit_panel_regression(panel: Panel, target: str) -> OlsFit:
    """Regress one panel column on all the others, with an intercept."""
    others = [name for name in panel.names if name != target]
    if not others:
        raise ValueError("panel needs at least one non-target column")
    y = panel.column(target)
    X = panel.select(others).values
    return fit(y, X, intercept=True, names=others)


def fit_returns_regression(panel: Panel, target: str) -> OlsFit:
    """Contemporaneous return regression of the target on its peers."""
    return fit_panel_regression(panel, target)
