"""The j0 = 19 condition as a quadratic in x1^16.

Once x22..x2 have been fixed by the descent and x0 enters only through
v = x0^4 + x0, the j0 = 19 residual r depends on x1 additively up to a
constant. Raised to the 64th power and scaled by x21^192 it reads

    A z^2 + A^2 z = B,    z = x1^16,

with A and B polynomials in (x21, x17, x13, x9, x5). Both are stored below
as monomial tables ``(e21, e17, e13, e9, e5)`` with coefficient 1.

A shorter closed form, kept as :func:`short_form_AB` for comparison, drops
every x17 term and the x13^7 x21^32 term of B: its A is exact only for
x17 = 0 and its B is not exact. The tables here were fitted against the
residual itself and are checked against a brute-force loop over x1 in the
tests.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from ..field import GF4096, schoolbook_mul
from . import kernels as K

A_TERMS: tuple[tuple[int, int, int, int, int], ...] = (
    (496, 0, 0, 0, 0),
    (288, 0, 1, 0, 0),
    (192, 0, 0, 16, 0),
    (96, 0, 0, 0, 16),
    (384, 16, 0, 0, 0),
    (272, 32, 0, 0, 0),
    (64, 32, 1, 0, 0),
    (48, 64, 0, 0, 0),
)

# exponents of x21 are taken mod 4095 (4079 = -16, 4063 = -32, 4047 = -48)
B_TERMS: tuple[tuple[int, int, int, int, int], ...] = (
    # x5^0, x9^0
    (708, 0, 0, 0, 0), (97, 0, 2, 0, 0), (292, 0, 2, 0, 0), (864, 0, 3, 0, 0),
    (448, 0, 5, 0, 0), (32, 0, 7, 0, 0),
    (1376, 16, 0, 0, 0), (960, 16, 2, 0, 0), (544, 16, 4, 0, 0), (128, 16, 6, 0, 0),
    (68, 32, 2, 0, 0), (848, 32, 2, 0, 0), (640, 32, 3, 0, 0), (16, 32, 6, 0, 0),
    (1152, 48, 0, 0, 0), (416, 64, 3, 0, 0), (0, 64, 5, 0, 0),
    (928, 80, 0, 0, 0), (512, 80, 2, 0, 0), (400, 96, 2, 0, 0),
    (384, 128, 1, 0, 0), (176, 128, 2, 0, 0), (4063, 128, 3, 0, 0),
    (64, 144, 2, 0, 0), (4047, 160, 2, 0, 0), (256, 176, 0, 0, 0),
    (144, 192, 0, 0, 0), (32, 208, 0, 0, 0),
    # x5^0, x9^16
    (1184, 0, 0, 16, 0), (768, 0, 2, 16, 0), (960, 32, 0, 16, 0), (512, 96, 0, 16, 0),
    (288, 128, 0, 16, 0), (64, 160, 0, 16, 0),
    # x5^0, x9^32
    (100, 0, 0, 32, 0), (880, 0, 0, 32, 0), (672, 0, 1, 32, 0), (48, 0, 4, 32, 0),
    (768, 16, 0, 32, 0), (656, 32, 0, 32, 0), (448, 32, 1, 32, 0), (432, 64, 0, 32, 0),
    (0, 96, 1, 32, 0), (4079, 128, 0, 32, 0),
    # x5^0, x9^48 and x9^64
    (576, 0, 0, 48, 0), (128, 64, 0, 48, 0),
    (272, 0, 0, 64, 0), (64, 0, 1, 64, 0),
    # x5^4
    (608, 0, 0, 0, 4), (192, 0, 2, 0, 4),
    # x5^16
    (672, 0, 2, 0, 16), (256, 0, 4, 0, 16), (448, 32, 2, 0, 16), (640, 64, 0, 0, 16),
    (0, 96, 2, 0, 16), (192, 128, 0, 0, 16),
    (480, 0, 0, 32, 16), (256, 32, 0, 32, 16), (32, 64, 0, 32, 16),
    # x5^32
    (688, 0, 0, 0, 32), (480, 0, 1, 0, 32), (576, 16, 0, 0, 32), (464, 32, 0, 0, 32),
    (256, 32, 1, 0, 32), (32, 64, 1, 0, 32), (128, 80, 0, 0, 32), (16, 96, 0, 0, 32),
    (384, 0, 0, 16, 32),
    # x5^48
    (288, 0, 0, 0, 48), (64, 32, 0, 0, 48),
)

X5_EXPONENTS = (0, 4, 16, 32, 48)


class QuadraticData(NamedTuple):
    A: int
    B: int


class Empty(NamedTuple):
    pass


class Pair(NamedTuple):
    x1a: int
    x1b: int


class All(NamedTuple):
    pass


SolutionSet = Empty | Pair | All


def _monomial(F: GF4096, term, vals) -> int:
    out = 1
    for e, v in zip(term, vals):
        if e:
            out = F.mul(out, F.pow(v, e))
    return out


def evaluate_terms(F: GF4096, terms, x21, x17, x13, x9, x5) -> int:
    vals = (x21, x17, x13, x9, x5)
    s = 0
    for t in terms:
        s ^= _monomial(F, t, vals)
    return s


class PrefixCoefficients(NamedTuple):
    """A = a0 + a16 x5^16 and B = sum_e b[e] x5^e for one (x21, x17, x13, x9)."""
    a0: int
    a16: int
    b: tuple[int, ...]  # indexed like X5_EXPONENTS


def prefix_coefficients(F: GF4096, x21: int, x17: int, x13: int, x9: int) -> PrefixCoefficients:
    def part(terms, e5):
        sub = [t[:4] + (0,) for t in terms if t[4] == e5]
        return evaluate_terms(F, sub, x21, x17, x13, x9, 0)

    return PrefixCoefficients(
        part(A_TERMS, 0), part(A_TERMS, 16), tuple(part(B_TERMS, e) for e in X5_EXPONENTS)
    )


class QuadraticEvaluator:
    """quadratic_AB with the x5-independent part cached per prefix."""

    def __init__(self, F: GF4096, cache_size: int = 4096):
        self.F = F
        self._cache: dict[tuple[int, int, int, int], PrefixCoefficients] = {}
        self.cache_size = cache_size

    def prefix(self, x21, x17, x13, x9) -> PrefixCoefficients:
        key = (x21, x17, x13, x9)
        pc = self._cache.get(key)
        if pc is None:
            if len(self._cache) >= self.cache_size:
                self._cache.clear()
            pc = prefix_coefficients(self.F, *key)
            self._cache[key] = pc
        return pc

    def __call__(self, x21, x17, x13, x9, x5) -> QuadraticData:
        if x21 == 0:
            raise ValueError("quadratic_AB needs x21 != 0")
        F = self.F
        pc = self.prefix(x21, x17, x13, x9)
        A = pc.a0 ^ F.mul(pc.a16, F.pow(x5, 16))
        B = 0
        for e, c in zip(X5_EXPONENTS, pc.b):
            if c:
                B ^= F.mul(c, F.pow(x5, e))
        return QuadraticData(A, B)


def quadratic_AB(F: GF4096, x21, x17, x13, x9, x5) -> QuadraticData:
    """Uncached evaluation straight from the monomial tables."""
    if x21 == 0:
        raise ValueError("quadratic_AB needs x21 != 0")
    return QuadraticData(
        evaluate_terms(F, A_TERMS, x21, x17, x13, x9, x5),
        evaluate_terms(F, B_TERMS, x21, x17, x13, x9, x5),
    )


def _pow_by_squaring(F: GF4096, a: int, e: int) -> int:
    """a^e using only multiplication; independent of the log tables."""
    e %= 4095
    if a == 0:
        return 0 if e else 1
    out, base = 1, a
    while e:
        if e & 1:
            out = schoolbook_mul(out, base, F.modulus)
        base = schoolbook_mul(base, base, F.modulus)
        e >>= 1
    return out


def quadratic_AB_reference(F: GF4096, x21, x17, x13, x9, x5) -> QuadraticData:
    """Second evaluation with schoolbook multiplication and repeated squaring."""
    vals = (x21, x17, x13, x9, x5)

    def ev(terms):
        s = 0
        for t in terms:
            m = 1
            for e, v in zip(t, vals):
                if e:
                    m = schoolbook_mul(m, _pow_by_squaring(F, v, e), F.modulus)
            s ^= m
        return s

    return QuadraticData(ev(A_TERMS), ev(B_TERMS))


def short_form_AB(F: GF4096, x21, x13, x9, x5) -> QuadraticData:
    """The short closed form of A and B (A exact for x17 = 0; B incomplete)."""
    P, m = F.pow, F.mul
    A = m(P(x21, 288), x13) ^ m(P(x21, 192), P(x9, 16)) ^ m(P(x21, 96), P(x5, 16)) ^ P(x21, 496)
    B = (
        m(P(x21, 272) ^ m(x13, P(x21, 64)), P(x9, 64))
        ^ m(P(x21, 576), P(x9, 48))
        ^ m(
            m(P(x21, 480), P(x5, 16)) ^ P(x21, 880) ^ m(x13, P(x21, 672)) ^ P(x21, 100)
            ^ m(P(x13, 4), P(x21, 48)),
            P(x9, 32),
        )
        ^ m(m(P(x21, 384), P(x5, 32)) ^ P(x21, 1184) ^ m(P(x13, 2), P(x21, 768)), P(x9, 16))
        ^ m(P(x21, 288), P(x5, 48))
        ^ m(P(x21, 688) ^ m(x13, P(x21, 480)), P(x5, 32))
        ^ m(m(P(x13, 2), P(x21, 672)) ^ m(P(x13, 4), P(x21, 256)), P(x5, 16))
        ^ m(P(x21, 608) ^ m(P(x13, 2), P(x21, 192)), P(x5, 4))
        ^ m(P(x13, 3), P(x21, 864)) ^ P(x21, 708) ^ m(P(x13, 5), P(x21, 448))
        ^ m(P(x13, 2), P(x21, 292)) ^ m(P(x13, 2), P(x21, 97))
    )
    return QuadraticData(A, B)


def solve_x1(F: GF4096, q: QuadraticData) -> SolutionSet:
    A, B = q
    if A == 0:
        return All() if B == 0 else Empty()
    c = F.div(B, F.pow(A, 3))
    roots = F.artin_schreier_solve(c)
    if roots is None:
        return Empty()
    za, zb = (F.mul(A, w) for w in roots)
    x1a, x1b = sorted((F.frob_pow(za, -4), F.frob_pow(zb, -4)))
    return Pair(x1a, x1b)


def solution_list(sol: SolutionSet) -> list[int]:
    if isinstance(sol, Pair):
        return [sol.x1a, sol.x1b]
    if isinstance(sol, All):
        return list(range(4096))
    return []


# -- compiled form ----------------------------------------------------------------

def term_array(terms) -> np.ndarray:
    return np.array(terms, dtype=np.int64).reshape(-1, 5)


A_ARR = term_array(A_TERMS)
B_ARR = term_array(B_TERMS)


@njit(cache=True, nogil=True)
def prefix_nb(x21, x17, x13, x9, TA, TB, T, out):
    """out[0] = a0, out[1] = a16, out[2..6] = B coefficients of x5^(0,4,16,32,48)."""
    for i in range(7):
        out[i] = 0
    for r in range(TA.shape[0]):
        m = K.fpow(x21, TA[r, 0], T)
        m = K.mul(m, K.fpow(x17, TA[r, 1], T), T)
        m = K.mul(m, K.fpow(x13, TA[r, 2], T), T)
        m = K.mul(m, K.fpow(x9, TA[r, 3], T), T)
        out[0 if TA[r, 4] == 0 else 1] ^= m
    for r in range(TB.shape[0]):
        m = K.fpow(x21, TB[r, 0], T)
        m = K.mul(m, K.fpow(x17, TB[r, 1], T), T)
        m = K.mul(m, K.fpow(x13, TB[r, 2], T), T)
        m = K.mul(m, K.fpow(x9, TB[r, 3], T), T)
        e5 = TB[r, 4]
        k = 2
        if e5 == 4:
            k = 3
        elif e5 == 16:
            k = 4
        elif e5 == 32:
            k = 5
        elif e5 == 48:
            k = 6
        out[k] ^= m


@njit(cache=True, nogil=True)
def ab_from_prefix(pc, x5, T):
    x5_4 = K.fpow(x5, 4, T)
    x5_16 = K.fpow(x5, 16, T)
    x5_32 = K.fpow(x5, 32, T)
    x5_48 = K.mul(x5_16, x5_32, T)
    A = pc[0] ^ K.mul(pc[1], x5_16, T)
    B = pc[2] ^ K.mul(pc[3], x5_4, T) ^ K.mul(pc[4], x5_16, T)
    B ^= K.mul(pc[5], x5_32, T) ^ K.mul(pc[6], x5_48, T)
    return A, B


@njit(cache=True, nogil=True)
def solve_x1_nb(A, B, T, out):
    """Writes the x1 roots to out; returns 0, 2, or -1 for 'every x1'."""
    if A == 0:
        return -1 if B == 0 else 0
    c = K.div(B, K.fpow(A, 3, T), T)
    w = T[K.ASR, c]
    if w < 0:
        return 0
    za = K.mul(A, w, T)
    zb = K.mul(A, w ^ 1, T)
    a = K.root2m(za, 4, T)
    b = K.root2m(zb, 4, T)
    if a > b:
        a, b = b, a
    out[0] = a
    out[1] = b
    return 2
