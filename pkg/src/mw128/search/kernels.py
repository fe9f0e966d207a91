"""Compiled inner loops for the minimal-vector search.

All field tables travel in one int64 array ``T`` (see :func:`pack_tables`)
so that a single compiled kernel serves every modulus. The coefficient
array ``x`` always has 23 slots, x[j] holding the coefficient of t^j.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..field import GF4096

# rows of the packed table
EXP, LOG, SQ, SQRT, TR, ASR, X4R, CONST = range(8)
# CONST row slots
C_A6 = 0

NX = 23
ETA_TOP = 66


def pack_tables(F: GF4096) -> np.ndarray:
    T = np.zeros((8, 8192), dtype=np.int64)
    T[EXP, : len(F.exp_np)] = F.exp_np
    T[LOG, :4096] = F.log_np
    T[SQ, :4096] = F.sq_np
    T[SQRT, :4096] = F.sqrt_np
    T[TR, :4096] = F.trace_np
    T[ASR, :4096] = -1
    T[X4R, :4096] = -1
    for y in range(4096):
        c = F.sq[y] ^ y
        if T[ASR, c] < 0:
            T[ASR, c] = y
        v = F.pow(y, 4) ^ y
        if T[X4R, v] < 0:
            T[X4R, v] = y
    T[CONST, C_A6] = F.a6
    return T


@njit(cache=True, nogil=True, inline="always")
def mul(a, b, T):
    if a == 0 or b == 0:
        return 0
    return T[EXP, T[LOG, a] + T[LOG, b]]


@njit(cache=True, nogil=True, inline="always")
def inv(a, T):
    return T[EXP, (4095 - T[LOG, a]) % 4095]


@njit(cache=True, nogil=True, inline="always")
def div(a, b, T):
    if a == 0:
        return 0
    return T[EXP, (T[LOG, a] - T[LOG, b]) % 4095]


@njit(cache=True, nogil=True, inline="always")
def fpow(a, n, T):
    if a == 0:
        return 1 if n == 0 else 0
    return T[EXP, (T[LOG, a] * n) % 4095]


@njit(cache=True, nogil=True, inline="always")
def root2m(a, m, T):
    """a^(2^-m)."""
    if a == 0 or m == 0:
        return a
    return T[EXP, (T[LOG, a] << (12 - m)) % 4095]


@njit(cache=True, nogil=True)
def eta_at(x, j, T):
    """eta_j of x^3 + t^65 + a6 (without the a6 at j = 0)."""
    lo = j - 22
    lo = (lo + 1) // 2 if lo > 0 else 0
    hi = j // 2
    if hi > 22:
        hi = 22
    s = 0
    for j2 in range(lo, hi + 1):
        b = x[j2]
        if b != 0:
            a = x[j - 2 * j2]
            if a != 0:
                s ^= T[EXP, T[LOG, a] + T[LOG, T[SQ, b]]]
    if j == 65:
        s ^= 1
    return s


@njit(cache=True, nogil=True)
def cond(x, j0, T):
    s = 0
    j = j0
    m = 0
    while j <= ETA_TOP:
        e = eta_at(x, j, T)
        if e != 0:
            s ^= root2m(e, m, T)
        j <<= 1
        m += 1
    return s


@njit(cache=True, nogil=True)
def descend_range(x, hi, lo, T):
    """Consume conditions j0 = hi, hi-2, ..., lo (lo >= 23).

    Solves the scheduled unknown for each j0 and checks the rest. Returns 0
    on success or the first failing j0.
    """
    x21 = x[21]
    for j0 in range(hi, lo - 1, -2):
        if j0 % 4 == 1:
            u = (j0 - 21) // 2
            x[u] = 0
            r = cond(x, j0, T)
            x[u] = T[SQRT, div(r, x21, T)]
        elif j0 >= 47:
            u = j0 - 44
            x[u] = 0
            r = cond(x, j0, T)
            x[u] = div(r, T[SQ, x[22]], T)
        else:
            if cond(x, j0, T) != 0:
                return j0
    return 0


@njit(cache=True, nogil=True)
def x0_value(x, T):
    """x0^4 + x0 forced by the j0 = 21 condition; needs x[0] == 0."""
    r = cond(x, 21, T)
    return T[SQ, div(r, x[21], T)]


@njit(cache=True, nogil=True)
def residual19(x, v, T):
    """The j0 = 19 condition with the x0 terms expressed through v = x0^4 + x0.

    x[0] must be 0; the x0 contribution is x19 * v^(1/2).
    """
    return cond(x, 19, T) ^ mul(x[19], T[SQRT, v], T)


@njit(cache=True, nogil=True)
def fill_xi(x, x21, x17, x13, x9, x5, x1):
    for j in range(NX):
        x[j] = 0
    x[21] = x21
    x[17] = x17
    x[13] = x13
    x[9] = x9
    x[5] = x5
    x[1] = x1


@njit(cache=True, nogil=True)
def complete(x, T):
    """Finish a coefficient array whose x22..x14 and odd part are known.

    Runs j0 = 45..23, picks x0, checks j0 = 19..1 and the constant term.
    Returns 0 when a point exists (x filled, x[0] = the smallest root),
    -1 when x0 has no solution in k, -2 when y(0) does not exist, or the
    failing j0.
    """
    bad = descend_range(x, 45, 23, T)
    if bad != 0:
        return bad
    x[0] = 0
    v = x0_value(x, T)
    x0 = T[X4R, v]
    if x0 < 0:
        return -1
    x[0] = x0
    for j0 in range(19, 0, -2):
        if cond(x, j0, T) != 0:
            return j0
    c = T[EXP, T[LOG, x0] * 3 % 4095] if x0 != 0 else 0
    if T[TR, c ^ T[CONST, C_A6]] != 0:
        return -2
    return 0


@njit(cache=True, nogil=True)
def brute_x1_set(x21, x17, x13, x9, x5, T, out):
    """All x1 whose j0 = 19 residual vanishes (loops over k); returns count."""
    x = np.zeros(NX, dtype=np.int64)
    n = 0
    for x1 in range(4096):
        fill_xi(x, x21, x17, x13, x9, x5, x1)
        bad = descend_range(x, 65, 23, T)
        if bad != 0:
            continue
        x[0] = 0
        v = x0_value(x, T)
        if residual19(x, v, T) == 0:
            out[n] = x1
            n += 1
    return n


@njit(cache=True, nogil=True)
def residual19_at(x21, x17, x13, x9, x5, x1, T, x):
    fill_xi(x, x21, x17, x13, x9, x5, x1)
    descend_range(x, 65, 23, T)
    x[0] = 0
    v = x0_value(x, T)
    return residual19(x, v, T)


@njit(cache=True, nogil=True)
def numeric_AB(x21, x17, x13, x9, x5, g, T):
    """(A, B) read off the j0 = 19 residual itself.

    With s = x21^192 the residual r satisfies s*(r(x1) + r(0))^64 =
    A x1^32 + A^2 x1^16 and s*r(0)^64 = B. Two probes (x1 = 1 and x1 = g,
    g not in {0, 1}) pin down A.
    """
    x = np.zeros(NX, dtype=np.int64)
    s = fpow(x21, 192, T)
    r0 = residual19_at(x21, x17, x13, x9, x5, 0, T, x)
    d1 = residual19_at(x21, x17, x13, x9, x5, 1, T, x) ^ r0
    dg = residual19_at(x21, x17, x13, x9, x5, g, T, x) ^ r0
    g16 = fpow(g, 16, T)
    g32 = fpow(g, 32, T)
    rhs = mul(s, fpow(dg, 64, T), T) ^ mul(mul(s, fpow(d1, 64, T), T), g16, T)
    A = div(rhs, g16 ^ g32, T)
    B = mul(s, fpow(r0, 64, T), T)
    return A, B
