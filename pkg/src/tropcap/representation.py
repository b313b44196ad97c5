"""Capacities to integral functionals and back.

:func:`integral_functional` turns a capacity into the functional
``phi -> max-plus integral of phi``; :func:`reconstruct_capacity` recovers a
capacity from any monotone, plus-homogeneous functional by evaluating it on
two-valued test functions.
"""
from __future__ import annotations

import math

import numpy as np

from .capacities import Capacity, is_possibility
from .errors import InvalidFunctionalError, MonotonicityViolation, NonStabilizationError
from .functionals import Functional, upsilon_member
from .integrals import maxplus_integral, maxplus_integral_many
from .space import FiniteSpace, RealFunction, Subset

M_CAP = 64.0
GAP_FLOOR = 1e-12


def integral_functional(c: Capacity) -> Functional:
    return Functional(
        c.space,
        lambda phi: maxplus_integral(c, phi),
        kind="capacity",
        batch=lambda rows: maxplus_integral_many(c, rows),
        capacity=c,
    )


def reconstruct_capacity(I: Functional, space: FiniteSpace | None = None, tol: float = 1e-9,
                         m_cap: float = M_CAP) -> Capacity:
    """``c(A) = inf exp(I(phi))`` over functions ``<= 0`` that vanish on ``A``.

    The infimum is taken along the two-valued members ``0`` on ``A``,
    ``-M`` off ``A``, with ``M = 1, 2, 4, ...`` until consecutive values of
    ``exp(I)`` differ by less than ``tol``. For a monotone ``I`` every other
    member dominates one of these, so nothing is lost. Values below ``tol``
    are snapped to 0.

    Raises :class:`NonStabilizationError` if some subset has not settled by
    ``M = m_cap``, and :class:`InvalidFunctionalError` if the resulting table
    is not monotone.
    """
    space = space or I.space
    n = space.size
    masks = np.arange(1, space.n_subsets - 1)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    table = np.zeros(space.n_subsets)
    table[-1] = 1.0

    M = 1.0
    prev = np.exp(I.evaluate_many(np.where(bits, 0.0, -M)))
    last = prev.copy()
    active = np.arange(masks.size)
    while active.size:
        M *= 2.0
        if M > m_cap:
            failures = [{"set": Subset(space, int(masks[k])).points(),
                         "last_values": [float(last[k]), float(prev[k])]} for k in active]
            raise NonStabilizationError(
                f"{active.size} subset(s) did not stabilize by M = {m_cap}", failures)
        cur = np.exp(I.evaluate_many(np.where(bits[active], 0.0, -M)))
        done = np.abs(cur - prev[active]) < tol
        table[masks[active[done]]] = cur[done]
        last = prev.copy()
        prev[active] = cur
        active = active[~done]

    table = np.clip(table, 0.0, 1.0)
    table[table < tol] = 0.0
    table[-1] = 1.0
    try:
        return Capacity(space, table)
    except MonotonicityViolation as exc:
        raise InvalidFunctionalError(
            f"reconstructed set function is not monotone: {exc}",
            witness=(Subset(space, exc.smaller).points(), Subset(space, exc.larger).points()),
        ) from exc


def roundtrip_check(c: Capacity, tol: float = 1e-9) -> float:
    """Largest table deviation after integrating and reconstructing ``c``."""
    back = reconstruct_capacity(integral_functional(c), tol=tol)
    return float(np.max(np.abs(back.table - c.table)))


def maxitivity_witness(c: Capacity) -> tuple[RealFunction, RealFunction] | None:
    """Two functions on which the integral of ``c`` is not maxitive, or None.

    None exactly when ``c`` is a possibility capacity. Otherwise, for the
    violating pair ``(A, B)``, returns the test functions that are 0 on ``A``
    (resp. ``B``) and ``-M`` elsewhere, with ``M`` just past the depth of the
    smallest positive capacity value.
    """
    ok, pair = is_possibility(c)
    if ok:
        return None
    A, B = pair
    positive = c.table[c.table > 0.0]
    M = -math.log(max(GAP_FLOOR, float(positive.min()))) + 1.0
    return upsilon_member(A, 0.0, M), upsilon_member(B, 0.0, M)
