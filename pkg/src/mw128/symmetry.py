"""Known automorphisms of the lattice, orbits, stabilizers, kissing number.

An automorphism is stored in the normal form Q(c, d) . Phi^f . M(alpha) .
S(a, b), applied right to left:

    S(a, b):   (x, y) -> (x(at+b), y(at+b) + h),  h^2 + h = (at+b)^65 + t^65
    M(alpha):  (x, y) -> (alpha x, y)
    Phi:       (x, y) -> (sigma x, sigma y + e),  e^2 + e = a6^2 + a6
    Q(c, d):   (x, y) -> (x + c^2, y + c x + d),  c^4 = c, d^2 + d = c^3

sigma squares every coefficient. Because trace(e) = 1, Phi^12 is Q(0, 1),
so the 12 * 3 * 65 * 4096 * 8 normal forms are closed under composition.

On xi tuples the quaternion part acts trivially, and the stabilizer of a
point in G is isomorphic to the stabilizer of its xi tuple in G/Q (the 8
points over a valid xi form one free Q-orbit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

from .curve import MinimalPoint, degree, eta_from_x, on_curve, padded, recover_y, trim
from .field import GF4096, LinearizedMap
from .selmer import XiTuple, selmer_polynomial

GROUP_ORDER = 65 * 4096 * 3 * 8 * 12  # 76,677,120
XI_GROUP_ORDER = GROUP_ORDER // 8
DIMENSION = 128
MIN_NORM = 22
DISC_LOG2 = 120
EXPECTED_STABILIZERS = (1, 2, 3, 4, 6, 8, 12, 24)


class Automorphism(NamedTuple):
    a: int = 1
    b: int = 0
    alpha: int = 1
    frob: int = 0
    c: int = 0
    d: int = 0

    @property
    def quat(self) -> tuple[int, int]:
        return (self.c, self.d)


IDENTITY = Automorphism()


class OrbitClosureError(RuntimeError):
    """An orbit of a survivor reaches a canonical tuple the search did not find."""


def binom_odd(i: int, j: int) -> bool:
    """C(i, j) mod 2 by Lucas."""
    return (i & j) == j


def substitute(F: GF4096, p, a: int, b: int) -> list[int]:
    """p(a t + b)."""
    p = trim(p)
    n = len(p)
    out = [0] * n
    apow = [1] * n
    bpow = [1] * n
    for i in range(1, n):
        apow[i] = F.mul(apow[i - 1], a)
        bpow[i] = F.mul(bpow[i - 1], b)
    for i, coef in enumerate(p):
        if not coef:
            continue
        for j in range(i + 1):
            if binom_odd(i, j):
                out[j] ^= F.mul(coef, F.mul(apow[j], bpow[i - j]))
    return out


def poly_xor(p, q) -> list[int]:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) ^ (q[i] if i < len(q) else 0) for i in range(n)]


class Symmetry:
    """The group action for one field (modulus and a6)."""

    def __init__(self, F: GF4096):
        self.F = F
        self.mu65 = F.roots_of_unity(65)
        self.mu3 = F.roots_of_unity(3)
        self.gf4 = F.subfield(2)
        self.e = min(F.a6, F.a6 ^ 1)
        self.quaternions = [
            (c, d) for c in self.gf4 for d in range(4096) if F.sq[d] ^ d == F.pow(c, 3)
        ]
        if len(self.quaternions) != 8:
            raise AssertionError("expected 8 quaternion pairs")
        self._h_cache: dict[tuple[int, int], list[int]] = {}
        self.reference = basic_point(F)

    # -- the action -------------------------------------------------------------

    def translation_correction(self, a: int, b: int) -> list[int]:
        """h with h^2 + h = (at+b)^65 + t^65 (the lift with smaller constant)."""
        key = (a, b)
        h = self._h_cache.get(key)
        if h is None:
            F = self.F
            if F.pow(a, 65) != 1:
                raise ValueError("translation needs a^65 = 1")
            c = [0] * 65
            c[64] = F.mul(F.pow(a, 64), b)
            c[1] = F.mul(a, F.pow(b, 64))
            c[0] = F.pow(b, 65)
            h = recover_y(F, c)
            if h is None:
                raise AssertionError(f"no y-correction for t -> {a:03x} t + {b:03x}")
            self._h_cache[key] = h
        return h

    def apply(self, g: Automorphism, p: MinimalPoint) -> MinimalPoint:
        F = self.F
        x, y = list(p.x), list(p.y)
        if g.b or g.a != 1:
            x = substitute(F, x, g.a, g.b)
            y = poly_xor(substitute(F, y, g.a, g.b), self.translation_correction(g.a, g.b))
        if g.alpha != 1:
            x = [F.mul(g.alpha, v) for v in x]
        for _ in range(g.frob % 12):
            x = [F.sq[v] for v in x]
            y = poly_xor([F.sq[v] for v in y], [self.e])
        if g.c or g.d:
            y = poly_xor(poly_xor(y, [F.mul(g.c, v) for v in x]), [g.d])
            x = poly_xor(x, [F.sq[g.c]])
        return MinimalPoint(tuple(x), tuple(y))

    def act_x(self, g: Automorphism, x) -> list[int]:
        """The x-part of the action alone."""
        F = self.F
        x = list(x)
        if g.b or g.a != 1:
            x = substitute(F, x, g.a, g.b)
        f = g.frob % 12
        x = [F.frob_pow(F.mul(g.alpha, v), f) for v in x]
        if g.c:
            x = poly_xor(x, [F.sq[g.c]])
        return x

    def act_xi(self, g: Automorphism, xi: XiTuple) -> XiTuple:
        x = padded(self.act_x(g._replace(c=0, d=0), selmer_polynomial(self.F, xi)), 22)
        return XiTuple(x[21], x[17], x[13], x[9], x[5], x[1])

    # -- group structure --------------------------------------------------------

    def compose(self, g1: Automorphism, g2: Automorphism) -> Automorphism:
        """The normal form of apply(g1) after apply(g2).

        (a, b, alpha, frob, c) follow from the action on x; d is read off
        the action on a reference point.
        """
        F = self.F
        f1, f2 = g1.frob % 12, g2.frob % 12
        s = F.frob_pow
        a = F.mul(g2.a, s(g1.a, -f2))
        b = F.mul(g2.a, s(g1.b, -f2)) ^ g2.b
        alpha = F.mul(s(g1.alpha, -f2), g2.alpha)
        c = s(F.mul(g1.alpha, F.sq[g2.c]), f1 - 1) ^ g1.c
        p = self.reference
        target = self.apply(g1, self.apply(g2, p))
        for cc, d in self.quaternions:
            if cc == c:
                g = Automorphism(a, b, alpha, (f1 + f2) % 12, c, d)
                if self.apply(g, p) == target:
                    return g
        raise AssertionError("composition has no normal form")

    def inverse(self, g: Automorphism) -> Automorphism:
        F = self.F
        f = g.frob % 12
        a = F.inv(F.frob_pow(g.a, f))
        base = Automorphism(
            a, F.mul(a, F.frob_pow(g.b, f)), F.inv(F.frob_pow(g.alpha, f)), (12 - f) % 12
        )
        p = self.reference
        for c, d in self.quaternions:
            h = base._replace(c=c, d=d)
            if self.apply(g, self.apply(h, p)) == p:
                return h
        raise AssertionError("no inverse found")

    def random_element(self, rng) -> Automorphism:
        c, d = rng.choice(self.quaternions)
        return Automorphism(
            rng.choice(self.mu65), rng.randrange(4096), rng.choice(self.mu3),
            rng.randrange(12), c, d,
        )

    def order_of(self, g: Automorphism, limit: int = 10**6) -> int:
        h, n = g, 1
        while h != IDENTITY:
            h = self.compose(g, h)
            n += 1
            if n > limit:
                raise AssertionError("element order exceeds limit")
        return n

    # -- stabilizers of points -----------------------------------------------------

    def _translations_for_x17(self, X: list[int], target17: int, a: int, scale: int) -> list[int]:
        """b with the t^17 coefficient of scale * X(a t + b) equal to target17.

        The coefficient is scale * a^17 (X17 + b^2 X19 + b^4 X21); even
        coefficients of X do not contribute.
        """
        F = self.F
        need = F.div(F.div(target17, scale), F.pow(a, 17)) ^ X[17]
        return LinearizedMap.additive(F, {1: X[19], 2: X[21]}).solve(need)

    def stabilizer(self, p: MinimalPoint) -> list[Automorphism]:
        """All g with apply(g, p) == p.

        Loops over (frob, alpha, a); the t^21 coefficient filters them, the
        t^17 coefficient leaves at most two translations, and the quaternion
        pair is matched on x0 and y before a full comparison.
        """
        F = self.F
        x = padded(p.x, 23)
        if x[22] == 0 or x[21] == 0:
            raise ValueError("stabilizer needs deg x = 22 with x21 != 0")
        out = []
        for f in range(12):
            X = [F.frob_pow(v, f) for v in x]
            for alpha in self.mu3:
                sal = F.frob_pow(alpha, f)
                for a in self.mu65:
                    sa = F.frob_pow(a, f)
                    if F.mul(sal, F.mul(F.pow(sa, 21), X[21])) != x[21]:
                        continue
                    for sb in self._translations_for_x17(X, x[17], sa, sal):
                        base = Automorphism(a, F.frob_pow(sb, -f), alpha, f)
                        xa = padded(self.act_x(base, x), 23)
                        if xa[1:] != x[1:]:
                            continue
                        for c, d in self.quaternions:
                            if F.sq[c] ^ xa[0] != x[0]:
                                continue
                            g = base._replace(c=c, d=d)
                            if self.apply(g, p) == p:
                                out.append(g)
        return out

    def stabilizer_order(self, p: MinimalPoint) -> int:
        return len(self.stabilizer(p))

    # -- canonical forms on xi tuples ------------------------------------------------

    @cached_property
    def coset_rep(self) -> dict[int, tuple[int, int]]:
        """x21 in k* -> (representative, m) with m in mu195 and m * x21 = representative.

        Representatives are the smallest element of each class of GF(64)*
        modulo cube roots of unity; mu195 * GF(64)* is all of k*.
        """
        F = self.F
        gf64 = [v for v in F.subfield(6) if v]
        reps = {min(F.mul(r, w) for w in self.mu3) for r in gf64}
        scales = sorted({F.mul(al, F.pow(a, 21)) for a in self.mu65 for al in self.mu3})
        out = {}
        for x in range(1, 4096):
            for m in scales:
                y = F.mul(m, x)
                if y in reps:
                    out[x] = (y, m)
                    break
        return out

    def _split_scale(self, m: int) -> tuple[int, int]:
        """m = beta * a^21 with a^65 = 1, beta^3 = 1."""
        F = self.F
        for a in self.mu65:
            beta = F.div(m, F.pow(a, 21))
            if F.pow(beta, 3) == 1:
                return a, beta
        raise AssertionError("scale is not in mu65 * mu3")

    def x17_target(self, x21: int, x17: int) -> int:
        """0 or x21^7 a6: the translation class of x17 given x21."""
        F = self.F
        t = F.trace(F.div(x17, F.pow(x21, 7)))
        return F.mul(F.pow(x21, 7), F.a6) if t else 0

    def normalized_images(self, xi: XiTuple) -> list[tuple[Automorphism, XiTuple]]:
        """The 24 images of xi with x21 a representative and x17 in {0, x21^7 a6}."""
        F = self.F
        X_all = padded(selmer_polynomial(F, xi), 22)
        out = []
        for f in range(12):
            X = [F.frob_pow(v, f) for v in X_all]
            rep, m = self.coset_rep[X[21]]
            sa, beta = self._split_scale(m)
            a, alpha = F.frob_pow(sa, -f), F.frob_pow(beta, -f)
            # x17 after scaling without translation decides the class target
            x17_0 = F.mul(F.mul(beta, F.pow(sa, 17)), X[17])
            target = self.x17_target(rep, x17_0)
            for sb in self._translations_for_x17(X, target, sa, beta):
                g = Automorphism(a, F.frob_pow(sb, -f), alpha, f)
                out.append((g, self.act_xi(g, xi)))
        if len(out) != 24:
            raise AssertionError(f"expected 24 normalized images, got {len(out)}")
        return out

    def canonical_form(self, xi: XiTuple) -> XiTuple:
        return min(img for _, img in self.normalized_images(xi))

    def canonical_with_stabilizer(self, xi: XiTuple) -> tuple[XiTuple, int]:
        """(canonical form, order of the stabilizer of xi in G/Q).

        The elements taking xi to its canonical form are a coset of the
        stabilizer, so their number is its order.
        """
        images = [img for _, img in self.normalized_images(xi)]
        canon = min(images)
        return canon, images.count(canon)


# -- the explicit point --------------------------------------------------------------

def basic_x(F: GF4096, w: int, x0: int) -> list[int]:
    """x(t) for x21 = 1, x17 = x13 = x9 = x5 = 0, written with w = x1^2.

    w solves w^2 + w + 1 = 0 and x0^4 + x0 = w; the t and t^2 coefficients
    are w^2.
    """
    x = [0] * 23
    for j in (22, 21, 20, 19, 18, 16, 14, 11):
        x[j] = 1
    x[12] = w
    x[10] = w ^ 1
    x[8] = w
    x[6] = w
    x[4] = w ^ 1
    x[2] = F.sq[w]
    x[1] = F.sq[w]
    x[0] = x0
    return x


def basic_point(F: GF4096, w: int | None = None, x0: int | None = None) -> MinimalPoint:
    """The explicit minimal point; defaults to the smallest w and x0."""
    if w is None:
        w = min(v for v in F.subfield(2) if F.sq[v] ^ v == 1)
    if x0 is None:
        x0 = min(v for v in range(4096) if F.pow(v, 4) ^ v == w)
    x = basic_x(F, w, x0)
    y = recover_y(F, eta_from_x(F, x))
    if y is None:
        raise AssertionError("explicit point does not lift")
    return MinimalPoint(tuple(x), tuple(y))


def xi_of_point(p: MinimalPoint) -> XiTuple:
    x = padded(p.x, 23)
    return XiTuple(x[21], x[17], x[13], x[9], x[5], x[1])


# -- orbits and counting ---------------------------------------------------------------

@dataclass(frozen=True)
class OrbitRecord:
    xi: XiTuple  # canonical form
    representative: MinimalPoint
    stabilizer_order: int

    @property
    def orbit_size(self) -> int:
        return GROUP_ORDER // self.stabilizer_order


def orbit_partition(sym: Symmetry, survivors: Iterable[XiTuple], complete) -> list[OrbitRecord]:
    """Group survivors into orbits, one record per orbit, sorted by canonical xi.

    ``complete(xi)`` must return the representative point for a canonical xi.
    Raises OrbitClosureError if a canonical form is not itself a survivor.
    """
    surv = set(survivors)
    stab: dict[XiTuple, int] = {}
    for xi in sorted(surv):
        canon, s = sym.canonical_with_stabilizer(xi)
        if canon not in surv:
            raise OrbitClosureError(f"canonical form {canon} of {xi} was not found by the search")
        if stab.setdefault(canon, s) != s:
            raise AssertionError(f"stabilizer order differs inside the orbit of {canon}")
    return [OrbitRecord(c, complete(c), stab[c]) for c in sorted(stab)]


def stabilizer_histogram(records: Iterable[OrbitRecord]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for r in records:
        hist[r.stabilizer_order] = hist.get(r.stabilizer_order, 0) + 1
    return dict(sorted(hist.items()))


def inverse_stabilizer_sum(records: Iterable[OrbitRecord]) -> Fraction:
    return sum((Fraction(1, r.stabilizer_order) for r in records), Fraction(0))


def factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class KissingNumber:
    value: int
    inverse_stabilizer_sum: Fraction

    @property
    def factorization(self) -> dict[int, int]:
        return factorint(self.value) if self.value > 1 else {}

    def factor_string(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.factorization.items())]
        return " * ".join(parts) if parts else str(self.value)


def kissing_from_histogram(hist: dict[int, int]) -> KissingNumber:
    s = sum((Fraction(n, k) for k, n in hist.items()), Fraction(0))
    total = s * GROUP_ORDER
    if total.denominator != 1:
        raise ArithmeticError(f"kissing number {total} is not an integer")
    return KissingNumber(int(total), s)


def kissing_number(records: Iterable[OrbitRecord]) -> KissingNumber:
    return kissing_from_histogram(stabilizer_histogram(records))


# -- lattice constants -------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeConstants:
    dimension: int = DIMENSION
    min_norm: int = MIN_NORM
    disc_log2: int = DISC_LOG2
    disc_note: str = (
        "derived from |Sha| * disc = 2^120 with Sha trivial; not independently verified"
    )

    @property
    def center_density(self) -> Fraction:
        """(min/4)^(dim/2) / sqrt(disc); exact because disc is an even power of 2."""
        if self.disc_log2 % 2:
            raise ArithmeticError("sqrt(disc) is irrational")
        return Fraction(self.min_norm, 4) ** (self.dimension // 2) / 2 ** (self.disc_log2 // 2)

    @property
    def center_density_log2(self) -> float:
        d = self.center_density
        return math.log2(d.numerator) - math.log2(d.denominator)

    @staticmethod
    def min_norm_bound(n: int = 6) -> int:
        return 2 * ((2**n + 4) // 6)

    def as_dict(self) -> dict:
        d = self.center_density
        num, den = factorint(d.numerator), factorint(d.denominator)
        return {
            "dimension": self.dimension,
            "min_norm": self.min_norm,
            "min_norm_lower_bound": self.min_norm_bound(),
            "discriminant": f"2^{self.disc_log2}",
            "discriminant_note": self.disc_note,
            "center_density": "*".join(f"{p}^{e}" for p, e in num.items())
            + "/" + "*".join(f"{p}^{e}" for p, e in den.items()),
            "center_density_log2": round(self.center_density_log2, 6),
        }


def lattice_constants() -> LatticeConstants:
    return LatticeConstants()


# -- small structural facts ------------------------------------------------------------

def fixed_by_order5_scaling(F: GF4096, p: MinimalPoint) -> bool:
    """True if x(zeta t) = x(t) for some zeta of exact order 5."""
    x = trim(p.x)
    return any(trim(substitute(F, x, z, 0)) == x for z in F.roots_of_unity(5) if z != 1)


def is_minimal(F: GF4096, p: MinimalPoint) -> bool:
    return degree(p.x) == MIN_NORM and on_curve(F, p.x, p.y)


def stab24_xi(F: GF4096, a: int) -> XiTuple:
    """The xi tuple (1, a, 1, a+1, a^3+a^2+a, a^2+1) for a fifth root of unity a."""
    a2, a3 = F.pow(a, 2), F.pow(a, 3)
    return XiTuple(1, a, 1, a ^ 1, a3 ^ a2 ^ a, a2 ^ 1)
