"""Completing a xi tuple to minimal points."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..curve import MinimalPoint, eta_from_x, recover_y
from ..field import GF4096, LinearizedMap
from ..selmer import XiTuple, condition_value, descend, is_selmer_member
from . import kernels as K

QUATERNION_MULTIPLICITY = 8


class Rejected(NamedTuple):
    stage: int | str  # failing j0, or "x13", "x0", "y0"


class Accepted(NamedTuple):
    point: MinimalPoint  # smallest x0, smaller y0
    multiplicity: int = QUATERNION_MULTIPLICITY


CandidateResult = Rejected | Accepted


def complete_candidate(F: GF4096, xi: XiTuple) -> CandidateResult:
    """Run every condition on xi; the slow, table-free reference path."""
    if xi.x21 == 0:
        raise ValueError("complete_candidate needs x21 != 0")
    if not is_selmer_member(F, xi):
        return Rejected("x13")
    st = descend(F, xi, 21)
    if st.obstructed:
        return Rejected(st.obstructed_at)
    x0s = LinearizedMap.additive(F, {0: 1, 2: 1}).solve(st.x0_value)
    if not x0s:
        return Rejected("x0")
    x = dict(st.coeffs)
    x[0] = x0s[0]
    for j0 in range(19, 0, -2):
        if condition_value(F, x, j0) != 0:
            return Rejected(j0)
    coeffs = [x.get(j, 0) for j in range(23)]
    y = recover_y(F, eta_from_x(F, coeffs))
    if y is None:
        return Rejected("y0")
    return Accepted(MinimalPoint(tuple(coeffs), tuple(y)))


def all_completions(F: GF4096, p: MinimalPoint) -> list[MinimalPoint]:
    """The 8 points over the xi tuple of p (x0 + c^2, both y lifts)."""
    out = []
    for c in F.subfield(2):
        x = list(p.x)
        x[0] ^= F.sq[c]
        y = recover_y(F, eta_from_x(F, x))
        if y is None:
            raise AssertionError("quaternion partner does not lift")
        out.append(MinimalPoint(tuple(x), tuple(y)))
        y2 = list(y)
        y2[0] ^= 1
        out.append(MinimalPoint(tuple(x), tuple(y2)))
    return sorted(out, key=lambda q: (q.x, q.y))


class FastCompleter:
    """The compiled completion, returning the same point as complete_candidate."""

    def __init__(self, F: GF4096, T: np.ndarray | None = None):
        self.F = F
        self.T = K.pack_tables(F) if T is None else T

    def x_coeffs(self, xi: XiTuple) -> tuple[int, list[int]]:
        x = np.zeros(K.NX, dtype=np.int64)
        K.fill_xi(x, *xi)
        bad = K.descend_range(x, 65, 47, self.T)
        if bad == 0:
            bad = K.complete(x, self.T)
        return int(bad), [int(v) for v in x]

    def __call__(self, xi: XiTuple) -> CandidateResult:
        if not is_selmer_member(self.F, xi):
            return Rejected("x13")
        bad, x = self.x_coeffs(xi)
        if bad == -1:
            return Rejected("x0")
        if bad == -2:
            return Rejected("y0")
        if bad:
            return Rejected(bad)
        y = recover_y(self.F, eta_from_x(self.F, x))
        if y is None:
            raise AssertionError("compiled completion accepted a point that does not lift")
        return Accepted(MinimalPoint(tuple(x), tuple(y)))

    def point(self, xi: XiTuple) -> MinimalPoint:
        r = self(xi)
        if not isinstance(r, Accepted):
            raise ValueError(f"{xi} does not complete: {r}")
        return r.point
