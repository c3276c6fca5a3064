"""Response-surface p-values for unit-root and cointegration tau statistics.

The constants are the MacKinnon (1994) regression-surface coefficients,
shipped as a versioned JSON table (``data/mackinnon_surface.json``) that is
part of the package's external interface.  ``tau_pvalue`` maps a tau
statistic to an approximate p-value by evaluating the appropriate polynomial
and passing the result through the standard normal CDF.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.stats import norm

#: deterministic-term specifications the surfaces cover
SPECS = ("none", "constant", "constant_trend")


@lru_cache(maxsize=1)
def load_table() -> dict:
    """Parse and cache the bundled constants table."""
    text = resources.files("futlink.data").joinpath(
        "mackinnon_surface.json").read_text(encoding="utf-8")
    table = json.loads(text)
    for spec in SPECS:
        if spec not in table["surfaces"]:
            raise ValueError(f"constants table is missing spec {spec!r}")
    return table


def table_version() -> str:
    return load_table()["version"]


def tau_pvalue(stat: float, spec: str = "constant", n_series: int = 1) -> float:
    """Approximate p-value of a tau statistic.

    Parameters
    ----------
    stat : float
        The tau (t-type) statistic of the unit-root regression.
    spec : {"none", "constant", "constant_trend"}
        Deterministic terms of the regression the surface was built for.
    n_series : int
        Number of I(1) series under the null: 1 for a plain unit-root test,
        2 for a two-variable residual-based cointegration test (up to 6).
    """
    if spec not in SPECS:
        raise ValueError(f"spec must be one of {SPECS}, got {spec!r}")
    surface = load_table()["surfaces"][spec]
    if not 1 <= n_series <= len(surface["tau_star"]):
        raise ValueError(f"n_series must lie in [1, {len(surface['tau_star'])}]")
    row = n_series - 1

    tau_max = surface["tau_max"][row]
    if tau_max is not None and stat > tau_max:
        return 1.0
    if stat < surface["tau_min"][row]:
        return 0.0
    if stat <= surface["tau_star"][row]:
        coeffs = surface["small_p"][row]
    else:
        coeffs = surface["large_p"][row]
    return float(norm.cdf(np.polynomial.polynomial.polyval(stat, coeffs)))
