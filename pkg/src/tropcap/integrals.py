"""Max-plus, Choquet and Sugeno integrals of real functions with respect to capacities.

All three are evaluated on the chain of upper level sets of the integrand, so
only the distinct values of the function are visited. The max-plus integral
also has a threshold-grid version that does not rely on that reduction.
"""
from __future__ import annotations

import numpy as np

from ._backend import kernels
from .capacities import Capacity
from .errors import RangeViolation, TropcapError
from .space import RealFunction, same_space


def maxplus_integral(c: Capacity, phi: RealFunction) -> float:
    """``max_t ln c({phi >= t}) + t`` over the distinct values ``t`` of ``phi``.

    ``c({phi >= t})`` is a step function of ``t`` that only changes at values
    of ``phi``, so those thresholds are the only candidates. Thresholds with
    a zero-capacity level set contribute ``-inf`` and are skipped.
    """
    same_space(c, phi)
    return float(kernels.maxplus(c.table, phi.values))


def maxplus_integral_many(c: Capacity, rows) -> np.ndarray:
    """Vectorized :func:`maxplus_integral` over the rows of a 2-d array."""
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != c.space.size:
        raise TropcapError(f"expected rows of length {c.space.size}")
    return np.asarray(kernels.maxplus_batch(c.table, rows))


def maxplus_integral_grid_oracle(c: Capacity, phi: RealFunction, step: float) -> float:
    """Brute force over thresholds ``min phi + k*step`` (and ``max phi``)."""
    if not step > 0:
        raise TropcapError("grid step must be positive")
    same_space(c, phi)
    return float(kernels.maxplus_grid(c.table, phi.values, float(step)))


def choquet_integral(c: Capacity, phi: RealFunction) -> float:
    """``min phi + integral of c({phi >= t}) dt`` over ``[min phi, max phi]``, exact."""
    same_space(c, phi)
    return float(kernels.choquet(c.table, phi.values))


def sugeno_integral(c: Capacity, phi: RealFunction) -> float:
    """``max_t min(t, c({phi >= t}))``; needs ``phi`` valued in ``[0, 1]``."""
    same_space(c, phi)
    if phi.min() < 0.0 or phi.max() > 1.0:
        raise RangeViolation("the Sugeno integral needs a function with values in [0, 1]")
    return float(kernels.sugeno(c.table, phi.values))
