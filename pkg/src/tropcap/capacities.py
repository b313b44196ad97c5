"""Capacities, possibility capacities and their pushforwards along maps of finite spaces.

A capacity on an ``n``-point space is stored as a dense table of ``2**n``
values indexed by subset bitmask.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import (BoundaryViolation, DomainMismatchError, MonotonicityViolation,
                     RangeViolation, TropcapError)
from .space import FiniteSpace, Subset, same_space


def _mask(space: FiniteSpace, A) -> int:
    if isinstance(A, Subset):
        if A.space != space:
            raise DomainMismatchError("subset belongs to a different space")
        return A.mask
    if isinstance(A, (int, np.integer)):
        return int(A)
    return Subset.from_points(space, A).mask


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


class Capacity:
    """Normalized monotone set function on every subset of a finite space.

    Construction validates the table; an invalid table raises a
    :class:`~tropcap.errors.CapacityValidationError` subclass.
    """

    __slots__ = ("space", "table")

    def __init__(self, space: FiniteSpace, table):
        table = _frozen(table)
        _validate(space, table)
        self.space = space
        self.table = table

    @classmethod
    def _trusted(cls, space, table):
        self = cls.__new__(cls)
        table.flags.writeable = False
        self.space = space
        self.table = table
        return self

    def __call__(self, A) -> float:
        return float(self.table[_mask(self.space, A)])

    def __eq__(self, other):
        if not isinstance(other, Capacity):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.space, self.table.tobytes()))

    def __repr__(self):
        return f"Capacity(size={self.space.size}, table={self.table.tolist()})"

    def singletons(self) -> np.ndarray:
        return self.table[1 << np.arange(self.space.size)]

    def allclose(self, other: "Capacity", atol: float = 1e-9) -> bool:
        same_space(self, other)
        return bool(np.max(np.abs(self.table - other.table)) <= atol)

    def to_json(self) -> dict:
        values = [{"set": Subset(self.space, m).points(), "value": float(v)}
                  for m, v in enumerate(self.table)]
        return {"size": self.space.size, "values": values}

    @classmethod
    def from_json(cls, data: dict) -> "Capacity":
        return load_capacity(data)


def _validate(space: FiniteSpace, table: np.ndarray) -> None:
    n = space.size
    if table.shape != (1 << n,):
        raise TropcapError(f"capacity table needs {1 << n} entries, got {table.size}")
    bad = np.nonzero(~np.isfinite(table) | (table < 0.0) | (table > 1.0))[0]
    if bad.size:
        m = int(bad[0])
        raise RangeViolation(f"c({Subset(space, m).points()}) = {table[m]} is outside [0, 1]")
    mask, bit = kernels.first_cover_violation(table, n)
    if mask >= 0:
        larger = mask | (1 << bit)
        raise MonotonicityViolation(
            f"c({Subset(space, mask).points()}) = {table[mask]} > "
            f"c({Subset(space, larger).points()}) = {table[larger]}",
            mask, larger)
    if table[0] != 0.0:
        raise BoundaryViolation(f"c(empty set) = {table[0]}, must be 0")
    if table[-1] != 1.0:
        raise BoundaryViolation(f"c(X) = {table[-1]}, must be 1")


def validate_capacity(space: FiniteSpace, table) -> Capacity:
    """Return the capacity for ``table`` or raise with a witness.

    Monotonicity is checked on cover pairs ``(A, A | {x})`` only.
    """
    return Capacity(space, table)


@dataclass(frozen=True, eq=False)
class PossibilityDensity:
    """Point weights in ``[0, 1]`` whose maximum is exactly 1."""

    space: FiniteSpace
    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.shape != (self.space.size,):
            raise DomainMismatchError(
                f"density has {w.size} weights but the space has {self.space.size} points")
        if not np.all(np.isfinite(w)) or np.any(w < 0.0) or np.any(w > 1.0):
            raise RangeViolation("density weights must lie in [0, 1]")
        if w.max() != 1.0:
            raise BoundaryViolation(f"maximum density weight is {w.max()}, must be exactly 1")
        object.__setattr__(self, "weights", w)

    def __eq__(self, other):
        if not isinstance(other, PossibilityDensity):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.space, self.weights.tobytes()))

    def __repr__(self):
        return f"PossibilityDensity({self.weights.tolist()})"

    def to_json(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "PossibilityDensity":
        if not isinstance(data, dict) or not isinstance(data.get("weights"), list):
            raise TropcapError('a density must be a JSON object {"weights": [...]}')
        weights = data["weights"]
        size = data.get("size", len(weights))
        return cls(FiniteSpace(size), weights)


@dataclass(frozen=True, eq=False)
class SpaceMap:
    """A map of finite spaces, given by the image of every domain point."""

    domain: FiniteSpace
    codomain: FiniteSpace
    image: np.ndarray

    def __post_init__(self):
        img = np.array(self.image, dtype=np.int64)
        if img.shape != (self.domain.size,):
            raise DomainMismatchError("map needs one image point per domain point")
        if np.any(img < 0) or np.any(img >= self.codomain.size):
            raise TropcapError("map image contains an index outside the codomain")
        img.flags.writeable = False
        object.__setattr__(self, "image", img)

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other):
        if not isinstance(other, SpaceMap):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and np.array_equal(self.image, other.image))

    def __repr__(self):
        return f"SpaceMap({self.domain.size}->{self.codomain.size}, {self.image.tolist()})"

    def then(self, g: "SpaceMap") -> "SpaceMap":
        """The composite ``g o self``."""
        if g.domain != self.codomain:
            raise DomainMismatchError("maps do not compose")
        return SpaceMap(self.domain, g.codomain, g.image[self.image])

    def preimage(self, B) -> Subset:
        mask = _mask(self.codomain, B)
        pre = 0
        for x, y in enumerate(self.image.tolist()):
            if mask >> y & 1:
                pre |= 1 << x
        return Subset(self.domain, pre)

    @classmethod
    def identity(cls, space: FiniteSpace) -> "SpaceMap":
        return cls(space, space, np.arange(space.size))

    @classmethod
    def constant(cls, domain: FiniteSpace, codomain: FiniteSpace, y: int) -> "SpaceMap":
        return cls(domain, codomain, np.full(domain.size, y))

    def to_json(self) -> dict:
        return {"domain": self.domain.size, "codomain": self.codomain.size,
                "image": self.image.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "SpaceMap":
        try:
            return cls(FiniteSpace(data["domain"]), FiniteSpace(data["codomain"]), data["image"])
        except (KeyError, TypeError) as exc:
            raise TropcapError(f"malformed map JSON: {exc}") from exc


def possibility_capacity(d: PossibilityDensity) -> Capacity:
    """``c(A) = max of the weights over A``."""
    return Capacity._trusted(d.space, np.asarray(kernels.subset_max(d.weights)))


def density_of(c: Capacity) -> PossibilityDensity:
    """Singleton values of ``c`` as a density (meaningful for possibility capacities)."""
    return PossibilityDensity(c.space, c.singletons())


def is_possibility(c: Capacity, tol: float = 0.0):
    """Check ``c(A | B) = max(c(A), c(B))`` for all subsets.

    Returns ``(True, None)`` or ``(False, (A, B))`` with a violating pair of
    disjoint subsets. Implemented through the singleton characterization.
    """
    expected = kernels.subset_max(c.singletons())
    bad = np.nonzero(np.abs(c.table - expected) > tol)[0]
    if not bad.size:
        return True, None
    A, B = _split_violation(c, int(bad[0]), tol)
    return False, (Subset(c.space, A), Subset(c.space, B))


def _split_violation(c: Capacity, mask: int, tol: float) -> tuple[int, int]:
    # c(mask) exceeds the max over its singletons; peel points off while the
    # remainder still violates, keeping the best {x} / mask - {x} split seen
    t = c.table
    single = c.singletons()
    best, best_gap = None, -np.inf
    while mask & (mask - 1):
        pts = [x for x in range(c.space.size) if mask >> x & 1]
        for x in pts:
            bit = 1 << x
            gap = t[mask] - max(t[bit], t[mask ^ bit])
            if gap > best_gap:
                best, best_gap = (bit, mask ^ bit), gap
        if best_gap > tol:
            break
        for x in pts:
            rest = mask ^ (1 << x)
            if t[rest] - max(single[y] for y in pts if y != x) > tol:
                mask = rest
                break
        else:
            break
    return best


def dirac(space: FiniteSpace, x: int) -> Capacity:
    if not 0 <= x < space.size:
        raise TropcapError(f"point {x} is not in a {space.size}-point space")
    masks = np.arange(space.n_subsets)
    return Capacity._trusted(space, ((masks >> x) & 1).astype(np.float64))


def unanimity(space: FiniteSpace) -> Capacity:
    """1 on the whole space, 0 elsewhere."""
    table = np.zeros(space.n_subsets)
    table[-1] = 1.0
    return Capacity._trusted(space, table)


def pushforward(c: Capacity, f: SpaceMap) -> Capacity:
    """``(f_# c)(B) = c(f^{-1}(B))``."""
    if c.space != f.domain:
        raise DomainMismatchError("capacity does not live on the map's domain")
    pre = kernels.preimage_masks(f.image, f.codomain.size)
    return Capacity._trusted(f.codomain, c.table[pre].copy())


def monotone_completion(space: FiniteSpace, listed: dict[int, float]) -> np.ndarray:
    """Fill unlisted subsets with the maximum over the listed subsets they contain."""
    table = np.full(space.n_subsets, -1.0)
    for m, v in listed.items():
        table[m] = v
    table = np.asarray(kernels.monotone_closure(table, space.size))
    table[table < 0.0] = 0.0
    for m, v in listed.items():
        table[m] = v
    return table


def load_capacity(data: dict) -> Capacity:
    """Parse ``{"size": n, "values": [{"set": [...], "value": v}, ...]}``.

    Sparse listings are completed by monotone closure, then validated.
    """
    if not isinstance(data, dict) or "size" not in data or "values" not in data:
        raise TropcapError('capacity JSON needs "size" and "values"')
    space = FiniteSpace(data["size"])
    listed: dict[int, float] = {}
    for entry in data["values"]:
        try:
            m = Subset.from_points(space, entry["set"]).mask
            v = float(entry["value"])
        except (KeyError, TypeError) as exc:
            raise TropcapError(f"malformed capacity entry {entry!r}") from exc
        if m in listed and listed[m] != v:
            raise TropcapError(f"subset {entry['set']} listed twice with different values")
        listed[m] = v
    return Capacity(space, monotone_completion(space, listed))


def random_capacity(space: FiniteSpace, seed) -> Capacity:
    """Uniform draws per subset, closed upward by running maxima, scaled so ``c(X) = 1``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    raw = rng.random(space.n_subsets)
    raw[0] = 0.0
    table = np.asarray(kernels.monotone_closure(raw, space.size))
    table /= table[-1]
    table[0] = 0.0
    return Capacity._trusted(space, table)


def random_density(space: FiniteSpace, seed) -> PossibilityDensity:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    w = rng.random(space.size)
    w /= w.max()
    return PossibilityDensity(space, w)


def random_map(domain: FiniteSpace, codomain: FiniteSpace, seed) -> SpaceMap:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return SpaceMap(domain, codomain, rng.integers(0, codomain.size, domain.size))


def capacity_from_values(space: FiniteSpace, values: dict[Sequence[int], float]) -> Capacity:
    """Convenience constructor from ``{points: value}``, completed like the JSON loader."""
    listed = {Subset.from_points(space, k).mask: float(v) for k, v in values.items()}
    return Capacity(space, monotone_completion(space, listed))
