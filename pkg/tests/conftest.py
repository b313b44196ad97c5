import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from tropcap import FiniteSpace, Capacity, RealFunction
from tropcap.capacities import capacity_from_values


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def c2():
    """c({0}) = 0.5, c({1}) = 0.25 on two points; not a possibility capacity."""
    return capacity_from_values(FiniteSpace(2), {(0,): 0.5, (1,): 0.25, (0, 1): 1.0})


def pair_comonotone(phi, psi):
    """Literal pairwise product test in exact rational arithmetic."""
    phi = [Fraction(v) for v in phi]
    psi = [Fraction(v) for v in psi]
    n = len(phi)
    return all((phi[i] - phi[j]) * (psi[i] - psi[j]) >= 0 for i in range(n) for j in range(n))


def dense_grid_integral(c: Capacity, phi, step=1e-4):
    """Plain-Python threshold sweep over [min phi, max phi]; shares no code with the kernels."""
    phi = list(phi)
    lo, hi = min(phi), max(phi)
    best = -math.inf
    k = 0
    while True:
        t = lo + k * step
        if t > hi:
            t = hi  # the grid always closes at max phi
        mask = sum(1 << i for i, v in enumerate(phi) if v >= t)
        v = float(c.table[mask])
        if v > 0:
            best = max(best, math.log(v) + t)
        if t == hi:
            break
        k += 1
    return best


@st.composite
def capacities(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    seed = draw(st.integers(0, 2**32 - 1))
    from tropcap import random_capacity
    return random_capacity(FiniteSpace(n), seed)


@st.composite
def functions_on(draw, space, lo=-5.0, hi=5.0):
    vals = draw(st.lists(st.one_of(st.sampled_from([-1.0, -0.5, 0.0, 0.5, 1.0]),
                                   st.floats(lo, hi, allow_nan=False)),
                         min_size=space.size, max_size=space.size))
    return RealFunction(space, vals)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number, title, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
