"""Canonical prefixes (x21, x17, x13, x9) under the residual symmetries.

A prefix is normalized when x21 is the smallest element of its class in
GF(64)* modulo cube roots of unity and x17 is 0 or x21^7 a6. The group
elements taking a normalized prefix to a normalized prefix have a = 1: for
each of the 12 Frobenius powers the cube root beta is forced, and the
translation b is determined up to adding x21^(3/2). That gives 24
normalized images; the canonical prefix is their lexicographic minimum and
the number of images equal to it is the order of its stabilizer.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from ..field import GF4096
from . import kernels as K

XI_GROUP_ORDER = 65 * 4096 * 3 * 12  # the group acting on xi tuples
NORMALIZED_IMAGES = 24


class CellTables(NamedTuple):
    reps: np.ndarray  # the 21 representatives, ascending
    rep_of: np.ndarray  # x in GF(64)* -> representative of x * mu3
    beta_of: np.ndarray  # x -> beta in mu3 with beta * x = rep_of[x]
    gf16: np.ndarray


def cell_tables(F: GF4096) -> CellTables:
    mu3 = F.roots_of_unity(3)
    gf64 = [v for v in F.subfield(6) if v]
    rep_of = np.zeros(4096, dtype=np.int64)
    beta_of = np.zeros(4096, dtype=np.int64)
    for x in gf64:
        best = min((F.mul(b, x), b) for b in mu3)
        rep_of[x], beta_of[x] = best
    reps = np.array(sorted({int(rep_of[x]) for x in gf64}), dtype=np.int64)
    gf16 = np.array(F.subfield(4), dtype=np.int64)
    return CellTables(reps, rep_of, beta_of, gf16)


@njit(cache=True, nogil=True, inline="always")
def frob(v, f, T):
    if v == 0:
        return 0
    return T[K.EXP, (T[K.LOG, v] << f) % 4095]


@njit(cache=True, nogil=True)
def normalized_images(x21, x17, x13, x9, rep_of, beta_of, T, out):
    """Fill out[24, 4] with the normalized images; out[:, 4] = Frobenius power.

    x21 must lie in GF(64)*. Rows come in pairs (two translations).
    """
    a6 = T[K.CONST, K.C_A6]
    n = 0
    for f in range(12):
        X21 = frob(x21, f, T)
        X17 = frob(x17, f, T)
        X13 = frob(x13, f, T)
        X9 = frob(x9, f, T)
        X11 = K.fpow(X21, 16, T)
        beta = beta_of[X21]
        c = K.div(X17, K.fpow(X21, 7, T), T)
        cls = T[K.TR, c]
        if cls:
            c ^= a6
        w = T[K.ASR, c]
        rep = rep_of[X21]
        target = K.mul(K.fpow(rep, 7, T), a6, T) if cls else 0
        x21c = K.fpow(X21, 3, T)
        for k in range(2):
            ww = w ^ k
            b = T[K.SQRT, K.mul(ww, x21c, T)]
            b2 = T[K.SQ, b]
            b4 = T[K.SQ, b2]
            y9 = X9 ^ K.mul(X11, b2, T) ^ K.mul(X13, b4, T)
            out[n, 0] = rep
            out[n, 1] = target
            out[n, 2] = K.mul(beta, X13, T)
            out[n, 3] = K.mul(beta, y9, T)
            out[n, 4] = f
            n += 1
    return n


@njit(cache=True, nogil=True)
def _less(a0, a1, a2, a3, b0, b1, b2, b3):
    if a0 != b0:
        return a0 < b0
    if a1 != b1:
        return a1 < b1
    if a2 != b2:
        return a2 < b2
    return a3 < b3


@njit(cache=True, nogil=True)
def canonical_cells_nb(reps, gf16, rep_of, beta_of, T, out):
    """Rows (x21, x17, x13, x9, stabilizer order) of every canonical prefix."""
    a6 = T[K.CONST, K.C_A6]
    img = np.zeros((24, 5), dtype=np.int64)
    n = 0
    for ri in range(reps.shape[0]):
        r = reps[ri]
        for cls in range(2):
            x17 = K.mul(K.fpow(r, 7, T), a6, T) if cls else 0
            for hi in range(gf16.shape[0]):
                x13 = gf16[hi]
                for x9 in range(4096):
                    normalized_images(r, x17, x13, x9, rep_of, beta_of, T, img)
                    stab = 0
                    canon = True
                    for k in range(24):
                        if _less(img[k, 0], img[k, 1], img[k, 2], img[k, 3], r, x17, x13, x9):
                            canon = False
                            break
                        if img[k, 0] == r and img[k, 1] == x17 and img[k, 2] == x13 and img[k, 3] == x9:
                            stab += 1
                    if canon:
                        out[n, 0] = r
                        out[n, 1] = x17
                        out[n, 2] = x13
                        out[n, 3] = x9
                        out[n, 4] = stab
                        n += 1
    return n


class Cell(NamedTuple):
    index: int
    x21: int
    x17: int
    x13: int
    x9: int
    stabilizer: int

    @property
    def weight(self) -> int:
        """Number of prefixes (x21 in k*, x17 in k, x13 in GF(16), x9 in k) in its orbit."""
        return XI_GROUP_ORDER // self.stabilizer

    @property
    def prefix(self) -> tuple[int, int, int, int]:
        return (self.x21, self.x17, self.x13, self.x9)


def canonical_cells(F: GF4096, T: np.ndarray | None = None) -> list[Cell]:
    if T is None:
        T = K.pack_tables(F)
    ct = cell_tables(F)
    out = np.zeros((21 * 2 * 16 * 4096 // 8, 5), dtype=np.int64)
    n = canonical_cells_nb(ct.reps, ct.gf16, ct.rep_of, ct.beta_of, T, out)
    rows = sorted(tuple(int(v) for v in row) for row in out[:n])
    return [Cell(i, *row) for i, row in enumerate(rows)]


def prefix_space_size() -> int:
    return 4095 * 4096 * 16 * 4096


def x17_class(F: GF4096, x21: int, x17: int) -> int:
    return F.trace(F.div(x17, F.pow(x21, 7)))
