"""Lean QR-based least squares used inside the hypothesis-test regressions."""

from __future__ import annotations

import numpy as np

from .errors import SingularRegressionError


def qr_lstsq(y: np.ndarray, X: np.ndarray):
    """Solve min ||y - X b|| by QR; also return residuals, SSR and (X'X)^-1.

    Raises SingularRegressionError when X is numerically rank deficient.
    """
    n, k = X.shape
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or np.min(diag) <= np.finfo(float).eps * max(n, k) * np.max(diag):
        raise SingularRegressionError(
            f"regressor matrix ({n}x{k}) is numerically rank deficient"
        )
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    r_inv = np.linalg.solve(r, np.eye(k))
    xtx_inv = r_inv @ r_inv.T
    return beta, resid, ssr, xtx_inv


def gaussian_aic(ssr: float, n: int, k: int) -> float:
    """Concentrated Gaussian AIC up to an additive constant: n ln(SSR/n) + 2k."""
    if ssr <= 0:
        return -np.inf
    return n * np.log(ssr / n) + 2 * k
