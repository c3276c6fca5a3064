"""Derivative-free simplex optimization and finite-difference gradients.

Shared numerical engine for the maximum-likelihood estimators.  Everything
here is deterministic: the same objective, start point, and options produce
bitwise-identical results.  Central finite differences double as the oracle
for the neural-network gradient checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InfeasibleStartError, NonFiniteObjectiveError

# Internal coordinates for bounded maps are clipped so the image stays
# strictly inside the bounds in float64.
_INTERNAL_CLIP = 30.0


@dataclass
class NmOptions:
    """Termination and stepping controls for :func:`nelder_mead`."""

    max_iter: int = 5000
    x_tol: float = 1e-10
    f_tol: float = 1e-12
    initial_step: float = 0.1
    restarts: int = 0


@dataclass
class OptimResult:
    """Outcome of a simplex run.

    ``f_opt`` is the objective re-evaluated at ``x_opt`` on return, so the
    pair is always exactly consistent.  ``best_history`` records the best
    vertex value at the end of every iteration (non-increasing by
    construction of the simplex updates).
    """

    x_opt: np.ndarray
    f_opt: float
    iterations: int
    converged: bool
    termination_reason: str
    best_history: list = field(default_factory=list)


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += step if x0[i] == 0 else step * max(1.0, abs(x0[i]))
    return simplex


def _nelder_mead_once(objective, x0: np.ndarray, opts: NmOptions) -> OptimResult:
    n = x0.size
    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise NonFiniteObjectiveError(f"objective is not finite at x0={x0!r}")

    simplex = _initial_simplex(x0, opts.initial_step)
    fvals = np.empty(n + 1)
    fvals[0] = f0
    for i in range(1, n + 1):
        fvals[i] = float(objective(simplex[i]))

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    history = []
    reason = "max_iter"
    converged = False

    it = 0
    while it < opts.max_iter:
        it += 1
        order = np.argsort(fvals, kind="stable")
        simplex = simplex[order]
        fvals = fvals[order]

        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        spread = abs(fvals[-1] - fvals[0])
        if diameter < opts.x_tol:
            reason = "x_tol"
            converged = True
            break
        if spread < opts.f_tol:
            reason = "f_tol"
            converged = True
            break

        centroid = simplex[:-1].mean(axis=0)
        reflected = centroid + alpha * (centroid - simplex[-1])
        f_ref = float(objective(reflected))

        if f_ref < fvals[0]:
            expanded = centroid + gamma * (centroid - simplex[-1])
            f_exp = float(objective(expanded))
            if f_exp < f_ref:
                simplex[-1], fvals[-1] = expanded, f_exp
            else:
                simplex[-1], fvals[-1] = reflected, f_ref
        elif f_ref < fvals[-2]:
            simplex[-1], fvals[-1] = reflected, f_ref
        else:
            if f_ref < fvals[-1]:
                contracted = centroid + rho * (reflected - centroid)
            else:
                contracted = centroid + rho * (simplex[-1] - centroid)
            f_con = float(objective(contracted))
            if f_con < min(f_ref, fvals[-1]):
                simplex[-1], fvals[-1] = contracted, f_con
            else:
                # shrink toward the best vertex (which is left untouched)
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    fvals[i] = float(objective(simplex[i]))
        history.append(float(np.min(fvals)))

    best = int(np.argmin(fvals))
    x_opt = simplex[best].copy()
    f_opt = float(objective(x_opt))
    return OptimResult(x_opt, f_opt, it, converged, reason, history)


def nelder_mead(objective: Callable[[np.ndarray], float], x0,
                opts: NmOptions | None = None) -> OptimResult:
    """Minimize ``objective`` with the reflection/expansion/contraction simplex.

    Terminates when the simplex diameter drops below ``x_tol``, the vertex
    value spread drops below ``f_tol``, or ``max_iter`` is reached.  With
    ``opts.restarts > 0`` the search is rerun from deterministically
    perturbed copies of the incumbent optimum and the best result is kept
    (insurance against simplex collapse).
    """
    opts = opts or NmOptions()
    x0 = np.asarray(x0, dtype=float).ravel()
    result = _nelder_mead_once(objective, x0, opts)
    for k in range(1, opts.restarts + 1):
        offsets = np.array([
            opts.initial_step * 0.2 * k * (1.0 if (i + k) % 2 == 0 else -1.0)
            for i in range(x0.size)
        ])
        retry = _nelder_mead_once(objective, result.x_opt + offsets, opts)
        if retry.f_opt < result.f_opt:
            retry.best_history = result.best_history + retry.best_history
            result = retry
    return result


def fd_gradient(objective: Callable[[np.ndarray], float], x,
                eps: float = 1e-5) -> np.ndarray:
    """Central-difference gradient (f(x+eps e_i) - f(x-eps e_i)) / (2 eps)."""
    x = np.asarray(x, dtype=float).ravel()
    grad = np.empty_like(x)
    for i in range(x.size):
        bump = np.zeros_like(x)
        bump[i] = eps
        f_plus = float(objective(x + bump))
        f_minus = float(objective(x - bump))
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            raise NonFiniteObjectiveError(
                f"objective not finite within eps={eps} of x in coordinate {i}"
            )
        grad[i] = (f_plus - f_minus) / (2.0 * eps)
    return grad


def _logistic(u: float) -> float:
    return 1.0 / (1.0 + math.exp(-u))


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


class IdentityTransform:
    """No-op transform: constrained_minimize reduces to nelder_mead exactly."""

    def from_internal(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(u, dtype=float).copy()

    def to_internal(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float).copy()


class BoxTransform:
    """Per-parameter box constraints via smooth reparametrization.

    Each bound pair selects a mapping from the free internal coordinate u:

    * ``(lo, hi)``    logistic: x = lo + (hi - lo) * sigmoid(u)
    * ``(lo, None)``  exponential shift: x = lo + exp(u)
    * ``(None, hi)``  exponential shift: x = hi - exp(u)
    * ``(None, None)`` identity

    Internal coordinates of bounded parameters are clipped to +-30 so the
    image never touches a bound in float64.
    """

    def __init__(self, bounds: Sequence[tuple]):
        self.bounds = [(None if lo is None else float(lo),
                        None if hi is None else float(hi)) for lo, hi in bounds]
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and not lo < hi:
                raise ValueError(f"empty box ({lo}, {hi})")

    def from_internal(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        x = np.empty_like(u)
        for i, (lo, hi) in enumerate(self.bounds):
            if lo is None and hi is None:
                x[i] = u[i]
                continue
            v = min(max(u[i], -_INTERNAL_CLIP), _INTERNAL_CLIP)
            if lo is not None and hi is not None:
                x[i] = lo + (hi - lo) * _logistic(v)
            elif lo is not None:
                x[i] = lo + math.exp(v)
            else:
                x[i] = hi - math.exp(v)
        return x

    def to_internal(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = np.empty_like(x)
        for i, (lo, hi) in enumerate(self.bounds):
            if lo is None and hi is None:
                u[i] = x[i]
            elif lo is not None and hi is not None:
                if not lo < x[i] < hi:
                    raise InfeasibleStartError(
                        f"x[{i}]={x[i]} not strictly inside ({lo}, {hi})"
                    )
                u[i] = _logit((x[i] - lo) / (hi - lo))
            elif lo is not None:
                if not x[i] > lo:
                    raise InfeasibleStartError(f"x[{i}]={x[i]} not > {lo}")
                u[i] = math.log(x[i] - lo)
            else:
                if not x[i] < hi:
                    raise InfeasibleStartError(f"x[{i}]={x[i]} not < {hi}")
                u[i] = math.log(hi - x[i])
        return u


class SimplexPairTransform:
    """Two parameters (a, b) with a > 0, b > 0, a + b < 1.

    Reparametrized as a = s*w, b = s*(1-w) with s, w in (0, 1), each mapped
    through a logistic; feasibility holds for every internal point.
    """

    def from_internal(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.size != 2:
            raise ValueError("SimplexPairTransform is two-dimensional")
        s = _logistic(min(max(u[0], -_INTERNAL_CLIP), _INTERNAL_CLIP))
        w = _logistic(min(max(u[1], -_INTERNAL_CLIP), _INTERNAL_CLIP))
        return np.array([s * w, s * (1.0 - w)])

    def to_internal(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size != 2:
            raise ValueError("SimplexPairTransform is two-dimensional")
        a, b = float(x[0]), float(x[1])
        s = a + b
        if not (a > 0 and b > 0 and s < 1):
            raise InfeasibleStartError(
                f"(a, b)=({a}, {b}) not strictly inside the unit simplex"
            )
        return np.array([_logit(s), _logit(a / s)])


def constrained_minimize(objective: Callable[[np.ndarray], float], x0,
                         transform, opts: NmOptions | None = None) -> OptimResult:
    """Minimize under constraints by searching the transformed free space.

    The returned ``x_opt`` lives in the original space and is strictly
    feasible by construction; ``f_opt`` is the objective re-evaluated there.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    u0 = transform.to_internal(x0)

    def wrapped(u: np.ndarray) -> float:
        return objective(transform.from_internal(u))

    inner = nelder_mead(wrapped, u0, opts)
    x_opt = transform.from_internal(inner.x_opt)
    return OptimResult(x_opt, float(objective(x_opt)), inner.iterations,
                       inner.converged, inner.termination_reason,
                       inner.best_history)
