# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled edit-distance kernel. Same contract as ``itnforge._align_py``."""

from libc.stdlib cimport malloc, free


cdef long* _ids(seq, Py_ssize_t n) except NULL:
    cdef long* out = <long*>malloc((n + 1) * sizeof(long))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t k
    for k in range(n):
        out[k] = seq[k]
    return out


def edit_distance(a, b):
    cdef Py_ssize_t m = len(a), n = len(b), i, j
    cdef long best, ai
    cdef long* pa = _ids(a, m)
    cdef long* pb = _ids(b, n)
    cdef long* prev = <long*>malloc((n + 1) * sizeof(long))
    cdef long* cur = <long*>malloc((n + 1) * sizeof(long))
    cdef long* tmp
    try:
        if prev == NULL or cur == NULL:
            raise MemoryError()
        for j in range(n + 1):
            prev[j] = n - j
        for i in range(m - 1, -1, -1):
            cur[n] = m - i
            ai = pa[i]
            for j in range(n - 1, -1, -1):
                best = prev[j + 1] + (ai != pb[j])
                if prev[j] + 1 < best:
                    best = prev[j] + 1
                if cur[j + 1] + 1 < best:
                    best = cur[j + 1] + 1
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[0]
    finally:
        free(pa)
        free(pb)
        free(prev)
        free(cur)


def edit_ops(a, b):
    cdef Py_ssize_t m = len(a), n = len(b), i, j, w = n + 1
    cdef long best, ai, here
    cdef long* pa = _ids(a, m)
    cdef long* pb = _ids(b, n)
    cdef long* d = <long*>malloc((m + 1) * w * sizeof(long))
    cdef bytearray ops = bytearray()
    try:
        if d == NULL:
            raise MemoryError()
        for j in range(n + 1):
            d[m * w + j] = n - j
        for i in range(m - 1, -1, -1):
            d[i * w + n] = m - i
            ai = pa[i]
            for j in range(n - 1, -1, -1):
                best = d[(i + 1) * w + j + 1] + (ai != pb[j])
                if d[(i + 1) * w + j] + 1 < best:
                    best = d[(i + 1) * w + j] + 1
                if d[i * w + j + 1] + 1 < best:
                    best = d[i * w + j + 1] + 1
                d[i * w + j] = best
        i = 0
        j = 0
        while i < m or j < n:
            here = d[i * w + j]
            if i < m and j < n and d[(i + 1) * w + j + 1] + (pa[i] != pb[j]) == here:
                ops.append(77 if pa[i] == pb[j] else 83)
                i += 1
                j += 1
            elif i < m and d[(i + 1) * w + j] + 1 == here:
                ops.append(68)
                i += 1
            else:
                ops.append(73)
                j += 1
        return d[0], bytes(ops)
    finally:
        free(pa)
        free(pb)
        free(d)
