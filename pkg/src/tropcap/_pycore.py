"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_core`` module; used when the
extension is not built or ``TROPCAP_PURE=1`` is set.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_GRID_CHUNK = 4096


def _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def maxplus(table, values):
    table = _as_f64(table)
    values = _as_f64(values)
    order = np.argsort(-values, kind="stable")
    sv = values[order]
    masks = np.bitwise_or.accumulate(np.left_shift(1, order).astype(np.int64))
    # last index of each run of equal values closes a level set
    ends = np.append(sv[1:] != sv[:-1], True)
    caps = table[masks[ends]]
    ts = sv[ends]
    pos = caps > 0.0
    return float(np.max(np.log(caps[pos]) + ts[pos]))


def maxplus_batch(table, rows):
    table = _as_f64(table)
    rows = _as_f64(rows)
    weights = np.left_shift(1, np.arange(rows.shape[1])).astype(np.int64)
    # every value of a row is a candidate threshold; tied values share a mask
    masks = (rows[:, None, :] >= rows[:, :, None]) @ weights
    caps = table[masks]
    with np.errstate(divide="ignore"):
        cand = np.where(caps > 0.0, np.log(caps) + rows, -np.inf)
    return cand.max(axis=1)


def maxplus_grid(table, values, step):
    table = _as_f64(table)
    values = _as_f64(values)
    lo = float(values.min())
    hi = float(values.max())
    count = int(math.floor((hi - lo) / step)) + 1
    weights = np.left_shift(1, np.arange(values.size)).astype(np.int64)
    best = -math.inf
    for start in range(0, count, _GRID_CHUNK):
        ks = np.arange(start, min(count, start + _GRID_CHUNK))
        ts = lo + ks * step
        if start + _GRID_CHUNK >= count:
            ts = np.append(ts, hi)
        masks = (values[None, :] >= ts[:, None]) @ weights
        caps = table[masks]
        pos = caps > 0.0
        if pos.any():
            best = max(best, float(np.max(np.log(caps[pos]) + ts[pos])))
    return best


def _chain(values):
    """Distinct values ascending with the bitmask of each upper level set."""
    values = _as_f64(values)
    ts = np.unique(values)
    weights = np.left_shift(1, np.arange(values.size)).astype(np.int64)
    masks = (values[None, :] >= ts[:, None]) @ weights
    return ts, masks


def choquet(table, values):
    ts, masks = _chain(values)
    caps = _as_f64(table)[masks]
    return float(ts[0] + np.sum(np.diff(ts) * caps[1:]))


def sugeno(table, values):
    ts, masks = _chain(values)
    caps = _as_f64(table)[masks]
    return float(max(0.0, np.max(np.minimum(ts, caps))))


def monotone_closure(table, n):
    """Running maximum of ``table`` up the subset lattice (max-zeta transform)."""
    out = np.array(table, dtype=np.float64)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return out


def first_cover_violation(table, n):
    """Smallest ``(mask, bit)`` with ``table[mask] > table[mask | bit]``.

    Ordered by mask, then bit. Returns ``(-1, -1)`` when monotone.
    """
    table = _as_f64(table)
    best = None
    for i in range(n):
        view = table.reshape(-1, 2, 1 << i)
        bad = np.nonzero((view[:, 0, :] > view[:, 1, :]).ravel())[0]
        if bad.size:
            hi, lo = divmod(int(bad[0]), 1 << i)
            mask = (hi << (i + 1)) | lo
            if best is None or (mask, i) < best:
                best = (mask, i)
    return best if best is not None else (-1, -1)


def subset_max(weights):
    """Table of ``max(weights[A])`` over every bitmask ``A``; 0 on the empty set."""
    weights = _as_f64(weights)
    out = np.zeros(1 << weights.size)
    for i, w in enumerate(weights):
        view = out.reshape(-1, 2, 1 << i)
        np.maximum(view[:, 0, :], w, out=view[:, 1, :])
    return out


def preimage_masks(image, m):
    """Bitmask of ``f^{-1}(B)`` for every bitmask ``B`` of the codomain."""
    image = np.asarray(image, dtype=np.int64)
    fibers = np.zeros(m, dtype=np.int64)
    np.bitwise_or.at(fibers, image, np.left_shift(1, np.arange(image.size)).astype(np.int64))
    out = np.zeros(1 << m, dtype=np.int64)
    for y in range(m):
        view = out.reshape(-1, 2, 1 << y)
        np.bitwise_or(view[:, 0, :], fibers[y], out=view[:, 1, :])
    return out
