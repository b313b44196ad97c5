"""Functoriality, naturality of the integral, and the possibility-capacity monad on finite supports.

A :class:`FiniteSupportOuter` is a possibility capacity on a finite set of
possibility capacities (depth 1) or on a finite set of depth-1 outers
(depth 2). Multiplication flattens one level:
``mu(C)(F) = max_i w_i * c_i(F)``, which is where ``max_t C({c : c(F) >= t}) * t``
peaks (at ``t = c_i(F)``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacities import (Capacity, PossibilityDensity, SpaceMap, density_of, is_possibility,
                         possibility_capacity, pushforward, random_capacity, random_density,
                         random_map)
from .errors import DomainMismatchError, TropcapError
from .functionals import Functional, PropertyReport, Verdict, random_function_rows
from .integrals import maxplus_integral_many
from .space import FiniteSpace, RealFunction, Subset


def compose(psi: RealFunction, f: SpaceMap) -> RealFunction:
    """``psi o f`` on the domain of ``f``."""
    if psi.space != f.codomain:
        raise DomainMismatchError("function does not live on the map's codomain")
    return RealFunction(f.domain, psi.values[f.image])


def functional_pushforward(I: Functional, f: SpaceMap) -> Functional:
    """The functional ``psi -> I(psi o f)`` on the codomain of ``f``."""
    if I.space != f.domain:
        raise DomainMismatchError("functional does not live on the map's domain")
    image = f.image
    return Functional(
        f.codomain,
        lambda psi: I(RealFunction(f.domain, psi.values[image])),
        kind="pushforward",
        batch=lambda rows: I.evaluate_many(rows[:, image]),
        description=f"along {f!r}",
    )


def naturality_check(c: Capacity, f: SpaceMap, trials: int = 500, seed: int = 0) -> float:
    """Max over sampled ``psi`` of ``|int psi d(f_# c) - int (psi o f) dc|``."""
    if c.space != f.domain:
        raise DomainMismatchError("capacity does not live on the map's domain")
    rng = np.random.default_rng(seed)
    rows = random_function_rows(rng, trials, f.codomain.size)
    lhs = maxplus_integral_many(pushforward(c, f), rows)
    rhs = maxplus_integral_many(c, rows[:, f.image])
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True, eq=False)
class FiniteSupportOuter:
    supports: tuple
    weights: np.ndarray

    def __post_init__(self):
        supports = tuple(self.supports)
        w = np.array(self.weights, dtype=np.float64)
        if not supports:
            raise TropcapError("an outer capacity needs at least one support")
        if w.shape != (len(supports),):
            raise TropcapError("one weight per support is required")
        if not np.all(np.isfinite(w)) or np.any(w < 0.0) or np.any(w > 1.0):
            raise TropcapError("outer weights must lie in [0, 1]")
        if w.max() != 1.0:
            raise TropcapError(f"maximum outer weight is {w.max()}, must be exactly 1")
        kinds = {type(s) for s in supports}
        if kinds == {PossibilityDensity}:
            spaces = {s.space for s in supports}
        elif kinds == {FiniteSupportOuter}:
            if any(s.depth != 1 for s in supports):
                raise TropcapError("only depth-2 nesting is supported")
            spaces = {s.space for s in supports}
        else:
            raise TropcapError("supports must be all densities or all depth-1 outers")
        if len(spaces) != 1:
            raise DomainMismatchError("all supports must live on one base space")
        w.flags.writeable = False
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "weights", w)

    @property
    def depth(self) -> int:
        return 1 if isinstance(self.supports[0], PossibilityDensity) else 2

    @property
    def space(self) -> FiniteSpace:
        return self.supports[0].space

    def __repr__(self):
        return f"FiniteSupportOuter(depth={self.depth}, k={len(self.supports)})"

    def to_json(self) -> dict:
        return {"weights": self.weights.tolist(), "supports": [s.to_json() for s in self.supports]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSupportOuter":
        if not isinstance(data, dict) or "weights" not in data or "supports" not in data:
            raise TropcapError('outer JSON needs "weights" and "supports"')
        supports = [cls.from_json(s) if "supports" in s else PossibilityDensity.from_json(s)
                    for s in data["supports"]]
        return cls(tuple(supports), data["weights"])


def merged(supports, weights) -> FiniteSupportOuter:
    """Outer with repeated supports merged by taking the largest weight."""
    keep: dict = {}
    for s, w in zip(supports, weights):
        key = s.weights.tobytes() if isinstance(s, PossibilityDensity) else id(s)
        if key in keep:
            keep[key] = (keep[key][0], max(keep[key][1], float(w)))
        else:
            keep[key] = (s, float(w))
    sup, wts = zip(*keep.values())
    return FiniteSupportOuter(tuple(sup), np.array(wts))


def dirac_outer(d: PossibilityDensity) -> FiniteSupportOuter:
    """The unit at the level of possibility capacities: all mass on ``d``."""
    return FiniteSupportOuter((d,), np.array([1.0]))


def eta_image(d: PossibilityDensity) -> FiniteSupportOuter:
    """Push ``d`` along ``x -> dirac(x)``: supports are point masses weighted by ``d``."""
    n = d.space.size
    return FiniteSupportOuter(tuple(PossibilityDensity(d.space, np.eye(n)[x]) for x in range(n)),
                              d.weights)


def _support_tables(outer: FiniteSupportOuter) -> np.ndarray:
    return np.stack([possibility_capacity(s).table for s in outer.supports])


def mu_possibility(outer: FiniteSupportOuter) -> Capacity:
    """Flatten a depth-1 outer: ``F -> max_i w_i * c_i(F)``."""
    if outer.depth != 1:
        raise TropcapError("mu_possibility takes a depth-1 outer; flatten the inner level first")
    table = np.max(outer.weights[:, None] * _support_tables(outer), axis=0)
    return Capacity._trusted(outer.space, table)


def mu_bruteforce_oracle(outer: FiniteSupportOuter, F, grid_step: float,
                         exact: bool = False) -> float:
    """``max_t C({c_i : c_i(F) >= t}) * t`` over ``t`` in a grid on ``(0, 1]``.

    The grid is ``step, 2 step, ..., 1``; with ``exact=True`` the values
    ``c_i(F)`` themselves are added, which makes the maximum exact.
    """
    if outer.depth != 1:
        raise TropcapError("the oracle takes a depth-1 outer")
    if not grid_step > 0:
        raise TropcapError("grid step must be positive")
    mask = F.mask if isinstance(F, Subset) else Subset.from_points(outer.space, F).mask
    cF = _support_tables(outer)[:, mask]
    k = int(np.floor(1.0 / grid_step))
    ts = np.append(np.arange(1, k + 1) * grid_step, 1.0)
    if exact:
        ts = np.concatenate([ts, cF[cF > 0.0]])
    best = 0.0
    for t in ts:
        members = cF >= t
        if members.any():
            best = max(best, float(outer.weights[members].max()) * float(t))
    return best


def mu_inner_first(nested: FiniteSupportOuter) -> Capacity:
    """Flatten each inner outer, then the result (pushforward along mu, then mu)."""
    if nested.depth != 2:
        raise TropcapError("expected a depth-2 outer")
    flat = [density_of(mu_possibility(inner)) for inner in nested.supports]
    return mu_possibility(merged(flat, nested.weights))


def mu_outer_first(nested: FiniteSupportOuter) -> Capacity:
    """Multiply the outer weights into the inner ones (mu one level up), then flatten."""
    if nested.depth != 2:
        raise TropcapError("expected a depth-2 outer")
    sup, wts = [], []
    for w, inner in zip(nested.weights, nested.supports):
        sup.extend(inner.supports)
        wts.extend((w * inner.weights).tolist())
    return mu_possibility(merged(sup, wts))


def _random_outer(rng, space, max_supports, pool=None):
    k = int(rng.integers(1, max_supports + 1))
    sup = []
    for _ in range(k):
        if pool and rng.random() < 0.25:
            sup.append(pool[int(rng.integers(len(pool)))])
        else:
            d = random_density(space, rng)
            sup.append(d)
            if pool is not None:
                pool.append(d)
    w = rng.random(k)
    w[int(rng.integers(k))] = 1.0
    if rng.random() < 0.2:
        w[:] = 1.0
    return FiniteSupportOuter(tuple(sup), w)


def random_nested_outer(space: FiniteSpace, seed, max_supports: int = 4) -> FiniteSupportOuter:
    """Random depth-2 outer; some densities are shared between inner outers."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pool: list = []
    k = int(rng.integers(1, max_supports + 1))
    inner = [_random_outer(rng, space, max_supports, pool) for _ in range(k)]
    w = rng.random(k)
    w[int(rng.integers(k))] = 1.0
    return FiniteSupportOuter(tuple(inner), w)


def monad_law_harness(space: FiniteSpace, seed: int = 0, trials: int = 1000,
                      max_supports: int = 4, tol: float = 1e-12) -> PropertyReport:
    """Unit laws, associativity and the closed form vs. the threshold formula for mu."""
    rng = np.random.default_rng(seed)
    dev = {name: np.zeros(trials) for name in
           ("left_unit", "right_unit", "associativity", "oracle_exact", "possibility_output")}
    # the oracle comparison and the possibility check are exact
    limit = {name: 0.0 if name in ("oracle_exact", "possibility_output") else tol for name in dev}
    witness: dict = {}

    def record(name, k, value, wit):
        dev[name][k] = value
        if value > limit[name] and name not in witness:
            witness[name] = {"trial": k, **wit}

    for k in range(trials):
        d = random_density(space, rng)
        pd = possibility_capacity(d).table
        record("left_unit", k, float(np.max(np.abs(mu_possibility(dirac_outer(d)).table - pd))),
               {"density": d.to_json()})
        record("right_unit", k, float(np.max(np.abs(mu_possibility(eta_image(d)).table - pd))),
               {"density": d.to_json()})

        nested = random_nested_outer(space, rng, max_supports)
        a, b = mu_inner_first(nested), mu_outer_first(nested)
        record("associativity", k, float(np.max(np.abs(a.table - b.table))),
               {"outer": nested.to_json()})

        outer = nested.supports[0]
        mu = mu_possibility(outer)
        gap = max(abs(mu_bruteforce_oracle(outer, Subset(space, m), 0.25, exact=True) - mu.table[m])
                  for m in range(space.n_subsets))
        record("oracle_exact", k, gap, {"outer": outer.to_json()})
        record("possibility_output", k, 0.0 if is_possibility(mu)[0] else 1.0,
               {"outer": outer.to_json()})

    verdicts = {}
    for name, d in dev.items():
        verdicts[name] = Verdict(name, bool(np.all(d <= limit[name])), trials, float(d.max()),
                                 witness.get(name))
    return PropertyReport(verdicts, tol, seed, trials, mode="monad-laws",
                          meta={"size": space.size, "max_supports": max_supports})


def random_naturality_case(dom: FiniteSpace, cod: FiniteSpace, seed):
    """A random capacity on ``dom`` and a random map ``dom -> cod``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return random_capacity(dom, rng), random_map(dom, cod, rng)
