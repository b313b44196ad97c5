# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pycore`` for the reference numpy versions."""

import numpy as np

from libc.math cimport log, floor, INFINITY

BACKEND = "cython"

cdef enum:
    MAXN = 32


cdef inline int _sort_desc(const double[:] values, int* order) noexcept nogil:
    # insertion sort, n <= 20
    cdef int n = values.shape[0]
    cdef int i, j, k
    for i in range(n):
        k = i
        j = i - 1
        while j >= 0 and values[order[j]] < values[k]:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = k
    return n


cdef double _maxplus(const double[:] table, const double[:] values) noexcept nogil:
    cdef int order[MAXN]
    cdef int n = _sort_desc(values, order)
    cdef long mask = 0
    cdef double best = -INFINITY
    cdef double v, t, cand
    cdef int i
    for i in range(n):
        mask |= (<long>1) << order[i]
        t = values[order[i]]
        if i + 1 < n and values[order[i + 1]] == t:
            continue
        v = table[mask]
        if v > 0.0:
            cand = log(v) + t
            if cand > best:
                best = cand
    return best


def maxplus(const double[:] table, const double[:] values):
    return _maxplus(table, values)


def maxplus_batch(const double[:] table, const double[:, :] rows):
    cdef Py_ssize_t r
    out = np.empty(rows.shape[0])
    cdef double[:] o = out
    with nogil:
        for r in range(rows.shape[0]):
            o[r] = _maxplus(table, rows[r])
    return out


def maxplus_grid(const double[:] table, const double[:] values, double step):
    cdef int n = values.shape[0]
    cdef double lo = values[0], hi = values[0]
    cdef int i
    for i in range(n):
        if values[i] < lo:
            lo = values[i]
        if values[i] > hi:
            hi = values[i]
    cdef long count = <long>floor((hi - lo) / step) + 1
    cdef long k
    cdef long mask
    cdef double t, v, cand
    cdef double best = -INFINITY
    with nogil:
        for k in range(count + 1):
            t = lo + k * step if k < count else hi
            mask = 0
            for i in range(n):
                if values[i] >= t:
                    mask |= (<long>1) << i
            v = table[mask]
            if v > 0.0:
                cand = log(v) + t
                if cand > best:
                    best = cand
    return best


cdef int _chain(const double[:] values, double* ts, long* masks) noexcept nogil:
    # distinct values ascending, masks of the matching upper level sets
    cdef int order[MAXN]
    cdef int n = _sort_desc(values, order)
    cdef long mask = 0
    cdef int i, m = 0
    cdef double t
    for i in range(n):
        mask |= (<long>1) << order[i]
        t = values[order[i]]
        if i + 1 < n and values[order[i + 1]] == t:
            continue
        ts[m] = t
        masks[m] = mask
        m += 1
    # reverse into ascending order
    cdef double tt
    cdef long mm
    for i in range(m // 2):
        tt = ts[i]; ts[i] = ts[m - 1 - i]; ts[m - 1 - i] = tt
        mm = masks[i]; masks[i] = masks[m - 1 - i]; masks[m - 1 - i] = mm
    return m


def choquet(const double[:] table, const double[:] values):
    cdef double ts[MAXN]
    cdef long masks[MAXN]
    cdef int m = _chain(values, ts, masks)
    cdef double acc = ts[0]
    cdef int i
    for i in range(1, m):
        acc += (ts[i] - ts[i - 1]) * table[masks[i]]
    return acc


def sugeno(const double[:] table, const double[:] values):
    cdef double ts[MAXN]
    cdef long masks[MAXN]
    cdef int m = _chain(values, ts, masks)
    cdef double best = 0.0, cand
    cdef int i
    for i in range(m):
        cand = ts[i] if ts[i] < table[masks[i]] else table[masks[i]]
        if cand > best:
            best = cand
    return best


def monotone_closure(const double[:] table, int n):
    out = np.array(table, dtype=np.float64)
    cdef double[:] o = out
    cdef long size = (<long>1) << n
    cdef long mask, bit
    cdef int i
    with nogil:
        for i in range(n):
            bit = (<long>1) << i
            for mask in range(size):
                if mask & bit and o[mask ^ bit] > o[mask]:
                    o[mask] = o[mask ^ bit]
    return out


def first_cover_violation(const double[:] table, int n):
    cdef long size = (<long>1) << n
    cdef long mask
    cdef int i
    for mask in range(size):
        for i in range(n):
            if not (mask >> i) & 1 and table[mask] > table[mask | ((<long>1) << i)]:
                return (mask, i)
    return (-1, -1)


def subset_max(const double[:] weights):
    cdef int n = weights.shape[0]
    cdef long size = (<long>1) << n
    out = np.zeros(size)
    cdef double[:] o = out
    cdef long mask, low
    cdef int i
    with nogil:
        for mask in range(1, size):
            low = mask & -mask
            i = 0
            while (low >> i) != 1:
                i += 1
            o[mask] = o[mask ^ low] if o[mask ^ low] > weights[i] else weights[i]
    return out


def preimage_masks(image, int m):
    cdef const long[:] img = np.asarray(image, dtype=np.int64)
    cdef long fibers[MAXN]
    cdef int x, y
    for y in range(m):
        fibers[y] = 0
    for x in range(img.shape[0]):
        fibers[img[x]] |= (<long>1) << x
    cdef long size = (<long>1) << m
    out = np.zeros(size, dtype=np.int64)
    cdef long[:] o = out
    cdef long mask, low
    with nogil:
        for mask in range(1, size):
            low = mask & -mask
            y = 0
            while (low >> y) != 1:
                y += 1
            o[mask] = o[mask ^ low] | fibers[y]
    return out
