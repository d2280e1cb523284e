"""Pure-Python edit-distance kernel; the reference the compiled kernel must match.

Both kernels take two sequences of integer token ids. ``edit_ops`` returns
the minimal unit cost and an opcode string over ``M`` (match), ``S``
(substitute), ``D`` (delete from a) and ``I`` (insert from b).

The table is filled over suffixes, ``d[i][j] = dist(a[i:], b[j:])``, so
the path can be read forward from the start; at each cell the first
optimal move in the order diagonal, delete, insert is taken.
"""

from typing import List, Sequence, Tuple


def edit_distance(a: Sequence[int], b: Sequence[int]) -> int:
    m, n = len(a), len(b)
    prev = list(range(n, -1, -1))
    for i in range(m - 1, -1, -1):
        cur = [0] * (n + 1)
        cur[n] = m - i
        ai = a[i]
        for j in range(n - 1, -1, -1):
            best = prev[j + 1] + (ai != b[j])
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j + 1] + 1 < best:
                best = cur[j + 1] + 1
            cur[j] = best
        prev = cur
    return prev[0]


def _table(a: Sequence[int], b: Sequence[int]) -> List[List[int]]:
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for j in range(n + 1):
        d[m][j] = n - j
    for i in range(m - 1, -1, -1):
        row, below = d[i], d[i + 1]
        row[n] = m - i
        ai = a[i]
        for j in range(n - 1, -1, -1):
            best = below[j + 1] + (ai != b[j])
            if below[j] + 1 < best:
                best = below[j] + 1
            if row[j + 1] + 1 < best:
                best = row[j + 1] + 1
            row[j] = best
    return d


def edit_ops(a: Sequence[int], b: Sequence[int]) -> Tuple[int, bytes]:
    d = _table(a, b)
    m, n = len(a), len(b)
    ops = bytearray()
    i = j = 0
    while i < m or j < n:
        here = d[i][j]
        if i < m and j < n and d[i + 1][j + 1] + (a[i] != b[j]) == here:
            ops.append(77 if a[i] == b[j] else 83)  # M / S
            i += 1
            j += 1
        elif i < m and d[i + 1][j] + 1 == here:
            ops.append(68)  # D
            i += 1
        else:
            ops.append(73)  # I
            j += 1
    return d[0][0], bytes(ops)
