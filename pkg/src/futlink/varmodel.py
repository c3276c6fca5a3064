"""Vector autoregression: estimation, stability, forecasting, impulse responses.

The VAR(p) is estimated equation by equation with ordinary least squares on a
shared block of lagged regressors, so every single-equation diagnostic from
the regression module is available per series.  Impulse responses follow the
moving-average recursion, optionally orthogonalized through a Cholesky factor
of the residual covariance under a caller-chosen series ordering.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import regression
from .errors import (
    CholeskyFailureError,
    DimensionMismatchError,
    TooFewObservationsError,
)
from .panel import Panel


@dataclass(frozen=True)
class VarFit:
    """Estimated VAR(p) system.

    ``coefficient_matrices[l][i, j]`` is the effect of series j at lag l+1 on
    series i; it equals the matching slope in ``per_equation[i]`` exactly,
    because it is copied from it.
    """

    p: int
    names: tuple
    intercepts: np.ndarray
    coefficient_matrices: tuple   # p matrices, each N x N
    residual_cov: np.ndarray
    per_equation: tuple           # one OlsFit per series
    n_effective: int

    @property
    def n_series(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class StabilityReport:
    """Companion-matrix eigenvalue summary."""

    max_modulus: float
    stable: bool
    moduli: tuple


@dataclass(frozen=True)
class IrfResult:
    """Impulse responses: entry (h, i, j) = response of i at step h to shock j."""

    horizon: int
    responses: np.ndarray         # (horizon + 1, N, N)
    orthogonalized: bool
    ordering: tuple


def _lag_design(values: np.ndarray, p: int):
    t, n = values.shape
    rows = t - p
    blocks = [values[p - lag:t - lag, :] for lag in range(1, p + 1)]
    return np.hstack(blocks), values[p:, :], rows


def fit_var(panel: Panel, p: int = 1) -> VarFit:
    """Estimate a VAR(p) by per-equation OLS on the common lag block."""
    if p < 1:
        raise ValueError("lag order p must be >= 1")
    t, n = panel.values.shape
    if t <= n * p + p + 10:
        raise TooFewObservationsError(
            f"VAR({p}) on {n} series needs more than {n * p + p + 10} rows, got {t}"
        )
    design, lhs, n_eff = _lag_design(panel.values, p)
    lag_names = [f"{name}.l{lag}" for lag in range(1, p + 1) for name in panel.names]

    fits = []
    for i in range(n):
        fits.append(regression.fit(lhs[:, i], design, intercept=True,
                                   names=lag_names))

    intercepts = np.array([f.coefficients[0] for f in fits])
    mats = []
    for lag in range(p):
        block = np.empty((n, n))
        for i in range(n):
            block[i, :] = fits[i].coefficients[1 + lag * n:1 + (lag + 1) * n]
        mats.append(block)

    resid = np.column_stack([f.residuals for f in fits])
    denom = n_eff - n * p - 1
    if denom <= 0:
        raise TooFewObservationsError("no degrees of freedom for the residual covariance")
    cov = resid.T @ resid / denom
    cov = (cov + cov.T) / 2.0

    return VarFit(p, panel.names, intercepts, tuple(mats), cov, tuple(fits), n_eff)


def companion_matrix(fit: VarFit) -> np.ndarray:
    """Stack the lag matrices into the (N p) x (N p) companion form."""
    n, p = fit.n_series, fit.p
    comp = np.zeros((n * p, n * p))
    comp[:n, :] = np.hstack(fit.coefficient_matrices)
    if p > 1:
        comp[n:, :-n] = np.eye(n * (p - 1))
    return comp


def stability(fit: VarFit) -> StabilityReport:
    """Maximum companion eigenvalue modulus; stable when strictly below one."""
    eigs = np.linalg.eigvals(companion_matrix(fit))
    moduli = tuple(sorted((float(abs(e)) for e in eigs), reverse=True))
    return StabilityReport(moduli[0], moduli[0] < 1.0, moduli)


def _resolve_ordering(fit: VarFit, ordering) -> tuple:
    if ordering is None:
        return tuple(range(fit.n_series))
    perm = []
    for item in ordering:
        perm.append(fit.names.index(item) if isinstance(item, str) else int(item))
    if sorted(perm) != list(range(fit.n_series)):
        raise ValueError(f"ordering {ordering!r} is not a permutation of the series")
    return tuple(perm)


def ma_coefficients(fit: VarFit, horizon: int) -> np.ndarray:
    """Moving-average matrices: Psi_0 = I, Psi_h = sum B_l Psi_{h-l}."""
    n, p = fit.n_series, fit.p
    psi = np.empty((horizon + 1, n, n))
    psi[0] = np.eye(n)
    for h in range(1, horizon + 1):
        acc = np.zeros((n, n))
        for lag in range(1, min(h, p) + 1):
            acc += fit.coefficient_matrices[lag - 1] @ psi[h - lag]
        psi[h] = acc
    return psi


def irf(fit: VarFit, horizon: int, orthogonalized: bool = True,
        ordering=None) -> IrfResult:
    """Impulse responses over ``horizon`` steps.

    Non-orthogonalized responses propagate a unit shock per series (identity
    at step 0).  Orthogonalized responses propagate one-standard-deviation
    shocks identified by the Cholesky factor of the residual covariance,
    after permuting the series into ``ordering`` (default: panel order).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    report = stability(fit)
    if not report.stable:
        warnings.warn(
            f"VAR is not stable (max eigenvalue modulus {report.max_modulus:.4f}); "
            "impulse responses will not decay", stacklevel=2)
    psi = ma_coefficients(fit, horizon)
    perm = _resolve_ordering(fit, ordering)
    if not orthogonalized:
        return IrfResult(horizon, psi, False, perm)

    sigma = fit.residual_cov[np.ix_(perm, perm)]
    try:
        chol_perm = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailureError(
            "residual covariance is not positive definite"
        ) from exc
    # undo the permutation so responses stay in panel order
    inv = np.argsort(perm)
    chol = chol_perm[np.ix_(inv, inv)]
    responses = np.einsum("hij,jk->hik", psi, chol)
    return IrfResult(horizon, responses, True, perm)


def var_forecast(fit: VarFit, last_obs, steps: int) -> np.ndarray:
    """Iterate the fitted system forward from the last p observations.

    ``last_obs`` holds the final p rows of the sample (oldest first); the
    result has one row per forecast step.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    last = np.asarray(last_obs, dtype=float)
    if last.ndim == 1:
        last = last[None, :]
    if last.shape != (fit.p, fit.n_series):
        raise DimensionMismatchError(
            f"last_obs must be {fit.p}x{fit.n_series}, got {last.shape}"
        )
    history = [last[i] for i in range(fit.p)]
    out = np.empty((steps, fit.n_series))
    for h in range(steps):
        acc = fit.intercepts.copy()
        for lag in range(1, fit.p + 1):
            acc += fit.coefficient_matrices[lag - 1] @ history[-lag]
        out[h] = acc
        history.append(acc)
    return out


def select_order(panel: Panel, max_p: int, criterion: str = "aic"):
    """Information-criterion scan over lag orders 1..max_p (utility only).

    All candidates are scored on the sample trimmed at max_p so the
    likelihoods are comparable.  Returns (best_p, {p: score}).
    """
    if criterion not in ("aic", "bic"):
        raise ValueError("criterion must be 'aic' or 'bic'")
    if max_p < 1:
        raise ValueError("max_p must be >= 1")
    values = panel.values
    t, n = values.shape
    rows = t - max_p
    if rows <= n * max_p + 1:
        raise TooFewObservationsError("panel too short for the requested max_p")

    scores: dict[int, float] = {}
    lhs = values[max_p:, :]
    for p in range(1, max_p + 1):
        blocks = [values[max_p - lag:t - lag, :] for lag in range(1, p + 1)]
        design = np.hstack([np.ones((rows, 1)), *blocks])
        beta, *_ = np.linalg.lstsq(design, lhs, rcond=None)
        resid = lhs - design @ beta
        sigma_ml = resid.T @ resid / rows
        sign, logdet = np.linalg.slogdet(sigma_ml)
        if sign <= 0:
            scores[p] = np.inf
            continue
        n_params = p * n * n + n
        penalty = 2.0 if criterion == "aic" else float(np.log(rows))
        scores[p] = float(logdet + penalty * n_params / rows)
    best = min(scores, key=scores.get)
    return best, scores
