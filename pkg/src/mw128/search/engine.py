"""The per-cell search kernel.

For one canonical prefix (x21, x17, x13, x9) the kernel loops over all
x5, solves the quadratic for x1, and completes every candidate. Survivors
are written as rows (x5, x1, x0) where x0 is the smallest root of
x0^4 + x0 = v; the other seven (x0, y0) pairs follow by the quaternion
action.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from . import kernels as K
from . import quadratic as Q

# slots of the statistics vector
S_PREFIX_FAIL = 0  # descent j0 = 65..51 failed for the prefix (never for Selmer members)
S_X5_FAIL = 1  # descent j0 = 49, 47 failed
S_ALL = 2  # A = B = 0: every x1 tried
S_PAIR = 3  # two x1 roots
S_EMPTY = 4
S_TRIED = 5  # completions attempted
S_SAMPLED = 6  # shortcut spot checks run
S_MISMATCH = 7  # spot checks where the quadratic disagreed with the residual
S_NO_X0 = 8
S_NO_Y0 = 9
S_REJECT_LOW = 10  # rejected by some j0 <= 19
S_REJECT_19 = 11  # rejected at j0 = 19 (only possible in the A = B = 0 branch)
S_OVERFLOW = 12  # survivor buffer too small; the caller retries
N_STATS = 13

SAMPLE_SHIFT = 16  # spot-check one (cell, x5) pair in 2^16


@njit(cache=True, nogil=True, inline="always")
def _sampled(cell_index, x5, shift):
    h = (cell_index * 4096 + x5) * 2654435761
    h ^= h >> 15
    return (h & ((1 << shift) - 1)) == 0


@njit(cache=True, nogil=True)
def brute_residual_set(x, T, out):
    """x1 values with a vanishing j0 = 19 residual, for x with x22..x3 fixed."""
    y = np.empty(K.NX, dtype=np.int64)
    n = 0
    for x1 in range(4096):
        for j in range(K.NX):
            y[j] = x[j]
        y[1] = x1
        if K.descend_range(y, 45, 23, T) != 0:
            continue
        y[0] = 0
        v = K.x0_value(y, T)
        if K.residual19(y, v, T) == 0:
            out[n] = x1
            n += 1
    return n


@njit(cache=True, nogil=True)
def _try(x, x1, T, y, stats):
    for j in range(K.NX):
        y[j] = x[j]
    y[1] = x1
    stats[S_TRIED] += 1
    r = K.complete(y, T)
    if r == -1:
        stats[S_NO_X0] += 1
    elif r == -2:
        stats[S_NO_Y0] += 1
    elif r == 19:
        stats[S_REJECT_19] += 1
    elif r > 0:
        stats[S_REJECT_LOW] += 1
    return r


@njit(cache=True, nogil=True)
def search_cell(cell_index, x21, x17, x13, x9, T, TA, TB, sample_shift, surv, stats):
    """Returns the number of survivor rows written to surv (shape (m, 3))."""
    base = np.zeros(K.NX, dtype=np.int64)
    K.fill_xi(base, x21, x17, x13, x9, 0, 0)
    if K.descend_range(base, 65, 51, T) != 0:
        stats[S_PREFIX_FAIL] += 1
        return 0
    pc = np.zeros(7, dtype=np.int64)
    Q.prefix_nb(x21, x17, x13, x9, TA, TB, T, pc)
    x = np.empty(K.NX, dtype=np.int64)
    y = np.empty(K.NX, dtype=np.int64)
    roots = np.zeros(2, dtype=np.int64)
    brute = np.zeros(4096, dtype=np.int64)
    n = 0
    for x5 in range(4096):
        for j in range(K.NX):
            x[j] = base[j]
        x[5] = x5
        if K.descend_range(x, 49, 47, T) != 0:
            stats[S_X5_FAIL] += 1
            continue
        A, B = Q.ab_from_prefix(pc, x5, T)
        k = Q.solve_x1_nb(A, B, T, roots)
        if sample_shift >= 0 and _sampled(cell_index, x5, sample_shift):
            stats[S_SAMPLED] += 1
            m = brute_residual_set(x, T, brute)
            if k == -1:
                ok = m == 4096
            elif k == 0:
                ok = m == 0
            else:
                ok = m == 2 and brute[0] == roots[0] and brute[1] == roots[1]
            if not ok:
                stats[S_MISMATCH] += 1
        if k == 0:
            stats[S_EMPTY] += 1
            continue
        if k == -1:
            stats[S_ALL] += 1
            for x1 in range(4096):
                if _try(x, x1, T, y, stats) == 0:
                    if n >= surv.shape[0]:
                        stats[S_OVERFLOW] += 1
                        continue
                    surv[n, 0] = x5
                    surv[n, 1] = x1
                    surv[n, 2] = y[0]
                    n += 1
            continue
        stats[S_PAIR] += 1
        for i in range(2):
            if _try(x, roots[i], T, y, stats) == 0:
                if n >= surv.shape[0]:
                    stats[S_OVERFLOW] += 1
                    continue
                surv[n, 0] = x5
                surv[n, 1] = roots[i]
                surv[n, 2] = y[0]
                n += 1
    return n


@njit(cache=True, nogil=True)
def search_batch(cells, T, TA, TB, sample_shift, surv, counts, stats):
    """cells: rows (index, x21, x17, x13, x9). counts[i] = survivors of cell i.

    surv must have room for every survivor of the batch; rows are grouped by
    cell in input order.
    """
    total = 0
    for i in range(cells.shape[0]):
        c = search_cell(
            cells[i, 0], cells[i, 1], cells[i, 2], cells[i, 3], cells[i, 4],
            T, TA, TB, sample_shift, surv[total:], stats,
        )
        counts[i] = c
        total += c
    return total
