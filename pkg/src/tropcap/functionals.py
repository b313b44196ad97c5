"""Functionals on real functions, their axioms as executable checks, and test-function families.

A :class:`Functional` maps a :class:`~tropcap.space.RealFunction` on a fixed
space to a real number. :func:`property_report` samples the four axioms
(normalized, monotone, plus-homogeneous, comonotonically maxitive) plus full
maxitivity, and returns reproducible witnesses for every failure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PreconditionViolation, TropcapError
from .space import FiniteSpace, RealFunction, Subset, comonotonic, level_set, refines

AXIOMS = ("normalized", "monotone", "plus_homogeneous", "comonotone_maxitive")
SMALL_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)


class Functional:
    """A deterministic evaluator ``RealFunction -> float`` on one space.

    ``kind`` is ``"capacity"``, ``"pushforward"`` or ``"black-box"``.
    ``batch``, when given, evaluates a 2-d array of function values row by row
    and must agree with ``evaluator``.
    """

    def __init__(self, space: FiniteSpace, evaluator: Callable[[RealFunction], float],
                 kind: str = "black-box", batch: Callable[[np.ndarray], np.ndarray] | None = None,
                 capacity=None, description: str = ""):
        self.space = space
        self.evaluator = evaluator
        self.kind = kind
        self.batch = batch
        self.capacity = capacity
        self.description = description

    def __repr__(self):
        what = f" {self.description}" if self.description else ""
        return f"<Functional {self.kind}{what} on {self.space.size} points>"

    def __call__(self, phi) -> float:
        if not isinstance(phi, RealFunction):
            phi = RealFunction(self.space, phi)
        elif phi.space != self.space:
            raise TropcapError("function lives on a different space than the functional")
        return float(self.evaluator(phi))

    def evaluate_many(self, rows) -> np.ndarray:
        rows = np.ascontiguousarray(rows, dtype=np.float64)
        if self.batch is not None:
            return np.asarray(self.batch(rows), dtype=np.float64)
        return np.array([self.evaluator(RealFunction._trusted(self.space, r.copy())) for r in rows])


@dataclass
class Verdict:
    name: str
    passed: bool
    samples: int
    max_deviation: float
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "samples": self.samples,
                "max_deviation": self.max_deviation, "witness": self.witness}


@dataclass
class PropertyReport:
    verdicts: dict[str, Verdict]
    tol: float
    seed: int | None
    trials: int
    mode: str = "sampled"
    meta: dict = field(default_factory=dict)

    def __getitem__(self, name) -> Verdict:
        return self.verdicts[name]

    @property
    def axioms_pass(self) -> bool:
        """All four axioms of comonotonically maxitive functionals hold."""
        return all(self.verdicts[a].passed for a in AXIOMS if a in self.verdicts)

    @property
    def all_pass(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts.values() if not v.passed]

    def to_json(self) -> dict:
        return {"mode": self.mode, "tol": self.tol, "seed": self.seed, "trials": self.trials,
                "verdicts": [v.to_json() for v in self.verdicts.values()], **self.meta}


def upsilon_member(A: Subset, t: float, M: float) -> RealFunction:
    """The two-valued test function: ``t`` on ``A`` and ``t - M`` elsewhere.

    It lies below every function that is ``<= t``, equal to ``t`` on ``A``,
    and bounded below by ``t - M``.
    """
    if not M > 0:
        raise TropcapError("M must be positive")
    bits = (A.mask >> np.arange(A.space.size)) & 1
    return RealFunction(A.space, np.where(bits == 1, float(t), float(t) - float(M)))


def in_upsilon(psi: RealFunction, A: Subset, t: float) -> bool:
    """``psi <= t`` everywhere and ``psi == t`` on ``A`` (any function when ``A`` is empty)."""
    if A.mask == 0:
        return True
    return psi <= t and all(psi[a] == t for a in A)


def refine_comonotone(phi: RealFunction, t: float, psi: RealFunction) -> RealFunction:
    """``psi'(x) = min{psi(y) : phi(y) >= phi(x)}``.

    For ``t`` a value of ``phi`` and ``psi`` in the test family of
    ``{phi >= t}`` at height ``t``, the result stays in that family, lies
    below ``psi``, is comonotone with ``phi`` and is constant on every fibre
    of ``phi``.
    """
    if phi.space != psi.space:
        raise PreconditionViolation("phi and psi live on different spaces")
    if not np.any(phi.values == t):
        raise PreconditionViolation(f"t = {t} is not a value of phi")
    above = np.nonzero(psi.values > t)[0]
    if above.size:
        x = int(above[0])
        raise PreconditionViolation(f"psi({x}) = {psi[x]} exceeds t = {t}", point=x)
    on_level = np.nonzero((phi.values >= t) & (psi.values != t))[0]
    if on_level.size:
        x = int(on_level[0])
        raise PreconditionViolation(
            f"psi({x}) = {psi[x]} but x is in the level set of phi at {t}", point=x)
    v, w = phi.values, psi.values
    out = np.array([w[v >= v[x]].min() for x in range(v.size)])
    return RealFunction(phi.space, out)


def refinement_postconditions(phi: RealFunction, t: float, psi: RealFunction,
                              refined: RealFunction) -> dict[str, bool]:
    return {
        "below_psi": refined <= psi,
        "in_family": in_upsilon(refined, level_set(phi, t), t),
        "comonotone": comonotonic(refined, phi),
        "constant_on_fibres": refines(phi, refined),
    }


def _comonotone_rows(rng: np.random.Generator, count: int, n: int):
    # common weak order from tied random labels (dense ranks); both functions
    # are sorted uniforms indexed by rank, half of them snapped to a coarse grid
    levels = rng.integers(1, n + 1, count)
    labels = (rng.random((count, n)) * levels[:, None]).astype(np.int64)
    present = np.zeros((count, n), dtype=bool)
    present[np.arange(count)[:, None], labels] = True
    rank = np.take_along_axis(np.cumsum(present, axis=1) - 1, labels, axis=1)
    out = []
    for _ in range(2):
        u = np.sort(rng.uniform(-1.0, 1.0, (count, n)), axis=1)
        snap = rng.random(count) < 0.5
        u[snap] = np.round(u[snap] * 2.0) / 2.0
        out.append(np.take_along_axis(u, rank, axis=1))
    return out[0], out[1]


def generate_comonotone_pair(space: FiniteSpace, seed) -> tuple[RealFunction, RealFunction]:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    F, G = _comonotone_rows(rng, 1, space.size)
    return RealFunction(space, F[0]), RealFunction(space, G[0])


def random_function_rows(rng: np.random.Generator, count: int, n: int, spread: float = 1.0):
    """Uniform rows on ``[-spread, spread]``; every other row snapped to a half-step grid."""
    rows = rng.uniform(-spread, spread, (count, n))
    rows[1::2] = np.round(rows[1::2] * 2.0) / 2.0
    return rows


def _verdict(name, dev, tol, witness_of):
    dev = np.asarray(dev, dtype=np.float64)
    bad = np.nonzero(~(dev <= tol))[0]
    witness = witness_of(int(bad[0])) if bad.size else None
    top = float(np.max(dev)) if dev.size else 0.0
    return Verdict(name, not bad.size, int(dev.size), top, witness)


def property_report(I: Functional, space: FiniteSpace | None = None, trials: int = 1000,
                    seed: int = 0, tol: float = 1e-9, exhaustive: bool = False) -> PropertyReport:
    """Check the axioms of ``I`` on seeded random inputs (or a small exhaustive grid).

    Full maxitivity is reported too but is not one of the axioms. Failing
    verdicts carry the first failing trial's inputs, which reproduce the
    violation when fed back to ``I``.
    """
    space = space or I.space
    if space != I.space:
        raise TropcapError("functional and space disagree")
    if trials < 1:
        raise TropcapError("trials must be >= 1")
    if exhaustive:
        return _exhaustive_report(I, space, tol)
    n = space.size
    rng = np.random.default_rng(seed)
    ev = I.evaluate_many
    verdicts = {}

    gam = rng.uniform(-5.0, 5.0, trials)
    vals = ev(np.repeat(gam[:, None], n, axis=1))
    verdicts["normalized"] = _verdict(
        "normalized", np.abs(vals - gam), tol,
        lambda k: {"trial": k, "gamma": float(gam[k]), "value": float(vals[k])})

    f = random_function_rows(rng, trials, n)
    bump = rng.random((trials, n)) * (rng.random((trials, n)) < 0.5)
    g = f + bump
    If, Ig = ev(f), ev(g)
    verdicts["monotone"] = _verdict(
        "monotone", If - Ig, tol,
        lambda k: {"trial": k, "f": f[k].tolist(), "g": g[k].tolist(),
                   "I(f)": float(If[k]), "I(g)": float(Ig[k])})

    f = random_function_rows(rng, trials, n)
    gam = rng.uniform(-5.0, 5.0, trials)
    If, Ishift = ev(f), ev(f + gam[:, None])
    verdicts["plus_homogeneous"] = _verdict(
        "plus_homogeneous", np.abs(Ishift - If - gam), tol,
        lambda k: {"trial": k, "f": f[k].tolist(), "gamma": float(gam[k]),
                   "I(f)": float(If[k]), "I(f+gamma)": float(Ishift[k])})

    F, G = _comonotone_rows(rng, trials, n)
    verdicts["comonotone_maxitive"] = _maxitive_verdict("comonotone_maxitive", ev, F, G, tol)

    F = random_function_rows(rng, trials, n)
    G = random_function_rows(rng, trials, n)
    verdicts["maxitive"] = _maxitive_verdict("maxitive", ev, F, G, tol)

    return PropertyReport(verdicts, tol, seed, trials)


def _maxitive_verdict(name, ev, F, G, tol):
    IF, IG, IJ = ev(F), ev(G), ev(np.maximum(F, G))
    return _verdict(
        name, np.abs(IJ - np.maximum(IF, IG)), tol,
        lambda k: {"trial": k, "f": F[k].tolist(), "g": G[k].tolist(), "I(f)": float(IF[k]),
                   "I(g)": float(IG[k]), "I(f|g)": float(IJ[k])})


def _exhaustive_report(I: Functional, space: FiniteSpace, tol: float) -> PropertyReport:
    if space.size > 3:
        raise TropcapError("exhaustive mode is limited to spaces of at most 3 points")
    n = space.size
    grid = np.array(SMALL_GRID)
    funcs = np.array(list(itertools.product(SMALL_GRID, repeat=n)))
    vals = I.evaluate_many(funcs)
    index = {tuple(r): k for k, r in enumerate(funcs.tolist())}
    ev = I.evaluate_many
    verdicts = {}

    consts = np.repeat(grid[:, None], n, axis=1)
    cv = ev(consts)
    verdicts["normalized"] = _verdict(
        "normalized", np.abs(cv - grid), tol,
        lambda k: {"gamma": float(grid[k]), "value": float(cv[k])})

    a, b = np.nonzero(np.all(funcs[:, None, :] <= funcs[None, :, :], axis=2))
    verdicts["monotone"] = _verdict(
        "monotone", vals[a] - vals[b], tol,
        lambda k: {"f": funcs[a[k]].tolist(), "g": funcs[b[k]].tolist(),
                   "I(f)": float(vals[a[k]]), "I(g)": float(vals[b[k]])})

    fi, gi = np.meshgrid(np.arange(len(funcs)), np.arange(grid.size), indexing="ij")
    fi, gi = fi.ravel(), gi.ravel()
    shifted = ev(funcs[fi] + grid[gi][:, None])
    verdicts["plus_homogeneous"] = _verdict(
        "plus_homogeneous", np.abs(shifted - vals[fi] - grid[gi]), tol,
        lambda k: {"f": funcs[fi[k]].tolist(), "gamma": float(grid[gi[k]]),
                   "I(f)": float(vals[fi[k]]), "I(f+gamma)": float(shifted[k])})

    a, b = np.meshgrid(np.arange(len(funcs)), np.arange(len(funcs)), indexing="ij")
    a, b = a.ravel(), b.ravel()
    sa = np.sign(funcs[a][:, :, None] - funcs[a][:, None, :])
    sb = np.sign(funcs[b][:, :, None] - funcs[b][:, None, :])
    como = ~np.any(sa * sb < 0, axis=(1, 2))
    joins = np.maximum(funcs[a], funcs[b])
    jv = np.array([vals[index[tuple(r)]] for r in joins.tolist()])
    dev = np.abs(jv - np.maximum(vals[a], vals[b]))

    def wit(sel):
        return lambda k: {"f": funcs[a[sel][k]].tolist(), "g": funcs[b[sel][k]].tolist(),
                          "I(f)": float(vals[a[sel][k]]), "I(g)": float(vals[b[sel][k]]),
                          "I(f|g)": float(jv[sel][k])}

    verdicts["comonotone_maxitive"] = _verdict("comonotone_maxitive", dev[como], tol, wit(como))
    allp = np.ones_like(como)
    verdicts["maxitive"] = _verdict("maxitive", dev, tol, wit(allp))
    return PropertyReport(verdicts, tol, None, len(funcs), mode="exhaustive")


def replay_witness(I: Functional, name: str, witness: dict, tol: float = 1e-9) -> bool:
    """Re-evaluate a failing witness; True when it still violates ``name``."""
    space = I.space
    if name == "normalized":
        g = witness["gamma"]
        return not abs(I(space.constant(g)) - g) <= tol
    if name == "monotone":
        return not I(witness["f"]) - I(witness["g"]) <= tol
    if name == "plus_homogeneous":
        f, g = np.array(witness["f"]), witness["gamma"]
        return not abs(I(f + g) - I(f) - g) <= tol
    if name in ("comonotone_maxitive", "maxitive"):
        f, g = np.array(witness["f"]), np.array(witness["g"])
        return not abs(I(np.maximum(f, g)) - max(I(f), I(g))) <= tol
    raise TropcapError(f"unknown property {name!r}")
