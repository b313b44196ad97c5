"""Finite ground sets, real functions, subsets, level sets and comonotonicity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainMismatchError, TropcapError

MAX_SIZE = 20


@dataclass(frozen=True)
class FiniteSpace:
    """Points ``0 .. size-1``, optionally with display labels."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise TropcapError(f"space size must be a positive integer, got {self.size!r}")
        if self.size > MAX_SIZE:
            raise TropcapError(f"space size {self.size} exceeds the supported maximum {MAX_SIZE}")
        object.__setattr__(self, "size", int(self.size))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise TropcapError("labels must be distinct and one per point")
            object.__setattr__(self, "labels", labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def n_subsets(self) -> int:
        return 1 << self.size

    def points(self) -> range:
        return range(self.size)

    def subsets(self) -> Iterable["Subset"]:
        for mask in range(self.n_subsets):
            yield Subset(self, mask)

    def full(self) -> "Subset":
        return Subset(self, self.full_mask)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def constant(self, value: float) -> "RealFunction":
        return RealFunction(self, np.full(self.size, float(value)))

    def function(self, values: Sequence[float]) -> "RealFunction":
        return RealFunction(self, values)

    def subset(self, points: Iterable[int]) -> "Subset":
        return Subset.from_points(self, points)


class RealFunction:
    """A finite real value at every point of a space.

    ``values`` is stored as a read-only float64 array.
    """

    __slots__ = ("space", "values")

    def __init__(self, space: FiniteSpace, values):
        arr = np.array(values, dtype=np.float64)
        if arr.shape != (space.size,):
            raise DomainMismatchError(
                f"function has {arr.size} values but the space has {space.size} points")
        if not np.all(np.isfinite(arr)):
            raise TropcapError("function values must be finite")
        arr.flags.writeable = False
        self.space = space
        self.values = arr

    @classmethod
    def _trusted(cls, space, arr):
        # skips validation; arr must be a fresh finite float64 array of the right shape
        self = cls.__new__(cls)
        arr.flags.writeable = False
        self.space = space
        self.values = arr
        return self

    def __len__(self):
        return self.space.size

    def __getitem__(self, x):
        return float(self.values[x])

    def __iter__(self):
        return (float(v) for v in self.values)

    def __repr__(self):
        return f"RealFunction({self.values.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, RealFunction):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.space, self.values.tobytes()))

    def _check(self, other):
        if isinstance(other, RealFunction):
            same_space(self, other)
            return other.values
        return float(other)

    def __add__(self, other):
        return RealFunction(self.space, self.values + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RealFunction(self.space, self.values - self._check(other))

    def __or__(self, other):
        """Pointwise maximum."""
        return RealFunction(self.space, np.maximum(self.values, self._check(other)))

    def __and__(self, other):
        """Pointwise minimum."""
        return RealFunction(self.space, np.minimum(self.values, self._check(other)))

    def __le__(self, other):
        return bool(np.all(self.values <= self._check(other)))

    def __ge__(self, other):
        return bool(np.all(self.values >= self._check(other)))

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def allclose(self, other: "RealFunction", atol: float = 1e-9) -> bool:
        same_space(self, other)
        return bool(np.all(np.abs(self.values - other.values) <= atol))

    def to_json(self) -> list[float]:
        return self.values.tolist()

    @classmethod
    def from_json(cls, data, space: FiniteSpace | None = None) -> "RealFunction":
        if not isinstance(data, list):
            raise TropcapError("a function must be a JSON array of numbers")
        return cls(space or FiniteSpace(len(data)), data)


@dataclass(frozen=True)
class Subset:
    space: FiniteSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.size:
            raise TropcapError(f"mask {self.mask:#x} has bits outside a {self.space.size}-point space")
        object.__setattr__(self, "mask", int(self.mask))

    @classmethod
    def from_points(cls, space: FiniteSpace, points: Iterable[int]) -> "Subset":
        mask = 0
        for p in points:
            if not 0 <= int(p) < space.size:
                raise TropcapError(f"point {p} is not in a {space.size}-point space")
            mask |= 1 << int(p)
        return cls(space, mask)

    def points(self) -> list[int]:
        return [i for i in range(self.space.size) if self.mask >> i & 1]

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.points())

    def __or__(self, other: "Subset") -> "Subset":
        same_space(self, other)
        return Subset(self.space, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        same_space(self, other)
        return Subset(self.space, self.mask & other.mask)

    def issubset(self, other: "Subset") -> bool:
        same_space(self, other)
        return self.mask & ~other.mask == 0

    def __le__(self, other: "Subset") -> bool:
        return self.issubset(other)

    def __ge__(self, other: "Subset") -> bool:
        return other.issubset(self)

    def __repr__(self):
        return f"Subset({self.points()})"

    def to_json(self) -> list[int]:
        return self.points()

    @classmethod
    def from_json(cls, data, space: FiniteSpace) -> "Subset":
        return cls.from_points(space, data)


def same_space(a, b) -> FiniteSpace:
    if a.space != b.space:
        raise DomainMismatchError(
            f"objects live on different spaces ({a.space.size} vs {b.space.size} points)")
    return a.space


@total_ordering
class _NegInf:
    """The tagged extended-real value below every finite real."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __add__(self, other):
        if other is self or math.isfinite(other):
            return self
        raise TropcapError(f"NEG_INF + {other!r} is undefined")

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NEG_INF")


NEG_INF = _NegInf()


def ext_log(x: float):
    """``ln`` on ``[0, inf)`` with ``ln(0) = NEG_INF``."""
    if x < 0:
        raise TropcapError(f"log of negative value {x}")
    return NEG_INF if x == 0 else math.log(x)


def ext_max(*xs):
    """Maximum of extended reals; NEG_INF is the identity."""
    finite = [x for x in xs if x is not NEG_INF]
    return max(finite) if finite else NEG_INF


def level_set(phi: RealFunction, t: float) -> Subset:
    """Points where ``phi >= t``."""
    mask = 0
    for i, v in enumerate(phi.values):
        if v >= t:
            mask |= 1 << i
    return Subset(phi.space, mask)


def distinct_values(phi: RealFunction) -> list[float]:
    return np.unique(phi.values).tolist()


def comonotonic(phi: RealFunction, psi: RealFunction) -> bool:
    """True iff no pair of points is ordered oppositely by ``phi`` and ``psi``."""
    same_space(phi, psi)
    dphi = phi.values[:, None] - phi.values[None, :]
    dpsi = psi.values[:, None] - psi.values[None, :]
    # compare signs rather than the product, which can underflow
    return not bool(np.any(np.sign(dphi) * np.sign(dpsi) < 0))


def refines(phi: RealFunction, psi: RealFunction) -> bool:
    """True iff every fibre ``phi^{-1}(t)`` lies inside a single fibre of ``psi``.

    Equivalently ``psi`` is constant wherever ``phi`` is, i.e. ``psi`` factors
    through ``phi``.
    """
    same_space(phi, psi)
    seen: dict[float, float] = {}
    for a, b in zip(phi.values.tolist(), psi.values.tolist()):
        if seen.setdefault(a, b) != b:
            return False
    return True
