"""Arithmetic in k = GF(2^12) with log/antilog tables.

Elements are plain ints in [0, 4096): bit i is the coefficient of g^i in the
polynomial basis defined by the modulus. Addition is XOR.
"""

from __future__ import annotations

import configparser
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

DEGREE = 12
ORDER = 1 << DEGREE  # 4096
MULT_ORDER = ORDER - 1  # 4095 = 3^2 * 5 * 7 * 13

# x^12 + x^6 + x^4 + x + 1
DEFAULT_MODULUS = 0x1053
# x^12 + x^3 + 1, used as the second basis in cross-checks
ALT_MODULUS = 0x1009

_MULT_ORDER_PRIMES = (3, 5, 7, 13)


class ReducibleModulusError(ValueError):
    def __init__(self, modulus: int, factor: int):
        super().__init__(
            f"modulus {modulus:#x} is reducible: divisible by {factor:#x}"
        )
        self.modulus = modulus
        self.factor = factor


# -- carry-less polynomials over GF(2), ints as bit vectors -------------------

def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def find_factor(modulus: int) -> int | None:
    """Return the smallest nontrivial factor of ``modulus``, or None."""
    deg = modulus.bit_length() - 1
    for f in range(2, 1 << (deg // 2 + 1)):
        if f.bit_length() - 1 > deg // 2:
            break
        if poly_mod(modulus, f) == 0:
            return f
    return None


def schoolbook_mul(a: int, b: int, modulus: int) -> int:
    """Field product without tables (reference path for the tables)."""
    return poly_mod(clmul(a, b), modulus)


# -- the field ----------------------------------------------------------------

class GF4096:
    """GF(2^12) with full exp/log/square/sqrt tables.

    The canonical generator is the numerically smallest element of
    multiplicative order 4095. ``a6`` defaults to the smallest element of
    absolute trace 1.
    """

    def __init__(self, modulus: int = DEFAULT_MODULUS, a6: int | None = None):
        if modulus.bit_length() - 1 != DEGREE:
            raise ValueError(f"modulus {modulus:#x} does not have degree 12")
        factor = find_factor(modulus)
        if factor is not None:
            raise ReducibleModulusError(modulus, factor)
        self.modulus = modulus
        self.generator = self._smallest_primitive()

        exp = np.zeros(2 * MULT_ORDER, dtype=np.int64)
        log = np.full(ORDER, -1, dtype=np.int64)
        x = 1
        for i in range(MULT_ORDER):
            exp[i] = x
            log[x] = i
            x = schoolbook_mul(x, self.generator, modulus)
        if x != 1 or (log[1:] < 0).any():
            raise AssertionError("generator does not have order 4095")
        exp[MULT_ORDER:] = exp[:MULT_ORDER]
        self.exp_np = exp
        self.log_np = log

        sq = np.zeros(ORDER, dtype=np.int64)
        sq[1:] = exp[(2 * log[1:]) % MULT_ORDER]
        sqrt = np.zeros(ORDER, dtype=np.int64)
        sqrt[sq] = np.arange(ORDER)
        self.sq_np = sq
        self.sqrt_np = sqrt

        # python-list copies: faster for scalar lookups than numpy indexing
        self.exp = exp.tolist()
        self.log = log.tolist()
        self.sq = sq.tolist()
        self.sqrt_t = sqrt.tolist()

        tr = np.zeros(ORDER, dtype=np.int64)
        for x in range(ORDER):
            tr[x] = self._trace_slow(x)
        self.trace_np = tr
        self.trace_t = tr.tolist()

        self.a6 = self.pick_a6() if a6 is None else a6
        if self.trace(self.a6) != 1:
            raise ValueError(f"a6 = {self.a6:03x} does not have trace 1")

        self._as_root = self._artin_schreier_table()

    # construction helpers
    def _smallest_primitive(self) -> int:
        for g in range(2, ORDER):
            if all(
                self._slow_pow(g, MULT_ORDER // p) != 1 for p in _MULT_ORDER_PRIMES
            ):
                return g
        raise AssertionError("no primitive element")

    def _slow_pow(self, x: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = schoolbook_mul(r, x, self.modulus)
            x = schoolbook_mul(x, x, self.modulus)
            n >>= 1
        return r

    def _trace_slow(self, x: int) -> int:
        s, y = 0, x
        for _ in range(DEGREE):
            s ^= y
            y = self.sq[y]
        if s not in (0, 1):
            raise AssertionError("trace left GF(2)")
        return s

    def _artin_schreier_table(self) -> list[int]:
        # root[c] = smaller y with y^2 + y = c, or -1
        root = [-1] * ORDER
        for y in range(ORDER):
            c = self.sq[y] ^ y
            if root[c] < 0:
                root[c] = y
        return root

    # arithmetic
    @staticmethod
    def add(x: int, y: int) -> int:
        return x ^ y

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self.exp[self.log[x] + self.log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in GF(4096)")
        return self.exp[(MULT_ORDER - self.log[x]) % MULT_ORDER]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if n == 0 else 0
        return self.exp[(self.log[x] * n) % MULT_ORDER]

    def square(self, x: int) -> int:
        return self.sq[x]

    def sqrt(self, x: int) -> int:
        return self.sqrt_t[x]

    def frob_pow(self, x: int, m: int) -> int:
        """x^(2^(m mod 12)); negative m gives iterated square roots."""
        m %= DEGREE
        if x == 0:
            return 0
        return self.exp[(self.log[x] << m) % MULT_ORDER]

    def half_pow(self, x: int, num: int) -> int:
        """x^(num/2) as (x^num)^(1/2); negative num needs x != 0."""
        return self.sqrt_t[self.pow(x, num)]

    def trace(self, x: int) -> int:
        return self.trace_t[x]

    def pick_a6(self) -> int:
        for x in range(ORDER):
            if self.trace_t[x] == 1:
                return x
        raise AssertionError("no trace-1 element")

    def artin_schreier_solve(self, c: int) -> tuple[int, int] | None:
        """Both roots (y, y + 1) of Y^2 + Y = c, or None when trace(c) = 1."""
        y = self._as_root[c]
        if y < 0:
            return None
        return (y, y ^ 1)

    def order(self, x: int) -> int:
        if x == 0:
            raise ValueError("0 has no multiplicative order")
        from math import gcd

        return MULT_ORDER // gcd(self.log[x], MULT_ORDER)

    def roots_of_unity(self, n: int) -> list[int]:
        """All a with a^n = 1, as g^(4095/n)^i for i = 0..n-1."""
        if n <= 0 or MULT_ORDER % n:
            raise ValueError(f"{n} does not divide 4095")
        step = MULT_ORDER // n
        return [self.exp[i * step] for i in range(n)]

    def subfield(self, d: int) -> list[int]:
        """Elements of GF(2^d) inside k, d | 12, sorted."""
        if DEGREE % d:
            raise ValueError(f"GF(2^{d}) is not a subfield of GF(2^12)")
        return [x for x in range(ORDER) if self.frob_pow(x, d) == x]

    def in_subfield(self, x: int, d: int) -> bool:
        return self.frob_pow(x, d) == x

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, ORDER)

    def header(self) -> str:
        return (
            f"modulus={self.modulus:#x} generator={self.generator:03x} "
            f"a6={self.a6:03x}"
        )


# -- GF(2)-linear maps on k ---------------------------------------------------

@dataclass(frozen=True)
class LinearizedMap:
    """A GF(2)-linear map on k stored as the images of the 12 basis bits."""

    columns: tuple[int, ...]

    @classmethod
    def from_function(cls, fn) -> LinearizedMap:
        return cls(tuple(fn(1 << i) for i in range(DEGREE)))

    @classmethod
    def additive(cls, field: GF4096, terms: dict[int, int]) -> LinearizedMap:
        """The map X -> sum c * X^(2^m) for {m: c}; m may be negative."""

        def fn(x: int) -> int:
            r = 0
            for m, c in terms.items():
                r ^= field.mul(c, field.frob_pow(x, m))
            return r

        return cls.from_function(fn)

    def __call__(self, x: int) -> int:
        r = 0
        i = 0
        while x:
            if x & 1:
                r ^= self.columns[i]
            x >>= 1
            i += 1
        return r

    def kernel(self) -> list[int]:
        return solve_linear(self.columns, 0)

    def solve(self, v: int) -> list[int]:
        return solve_linear(self.columns, v)


def _eliminate(columns: Iterable[int], v: int):
    # Gaussian elimination on the augmented system; rows are output bits.
    rows = []
    cols = list(columns)
    for bit in range(DEGREE):
        row = 0
        for i, c in enumerate(cols):
            if (c >> bit) & 1:
                row |= 1 << i
        rows.append((row, (v >> bit) & 1))
    pivots = []
    r = 0
    for col in range(DEGREE):
        piv = next((i for i in range(r, DEGREE) if (rows[i][0] >> col) & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(DEGREE):
            if i != r and (rows[i][0] >> col) & 1:
                rows[i] = (rows[i][0] ^ rows[r][0], rows[i][1] ^ rows[r][1])
        pivots.append(col)
        r += 1
    return rows, pivots, r


def solve_linear(columns: Iterable[int], v: int) -> list[int]:
    """All x with sum_{bit i of x} columns[i] == v, sorted."""
    rows, pivots, rank = _eliminate(columns, v)
    if any(rows[i][1] for i in range(rank, DEGREE)):
        return []
    particular = 0
    for i, col in enumerate(pivots):
        if rows[i][1]:
            particular |= 1 << col
    free = [c for c in range(DEGREE) if c not in pivots]
    basis = []
    for f in free:
        vec = 1 << f
        for i, col in enumerate(pivots):
            if (rows[i][0] >> f) & 1:
                vec |= 1 << col
        basis.append(vec)
    sols = [particular]
    for b in basis:
        sols += [s ^ b for s in sols]
    return sorted(sols)


def linearized_solve(L: LinearizedMap, v: int) -> list[int]:
    return L.solve(v)


# -- config -------------------------------------------------------------------

@dataclass
class FieldConfig:
    """Field setup read from an INI-style file with a ``[field]`` section.

    Keys: ``modulus`` (hex or int), ``generator`` (only ``smallest-primitive``
    is supported), ``a6`` (optional hex override).
    """

    modulus: int = DEFAULT_MODULUS
    generator: str = "smallest-primitive"
    a6: int | None = None

    @classmethod
    def read(cls, path: str | Path) -> FieldConfig:
        cp = configparser.ConfigParser()
        with open(path) as fh:
            cp.read_file(fh)
        sec = cp["field"] if cp.has_section("field") else {}
        cfg = cls()
        if "modulus" in sec:
            cfg.modulus = int(sec["modulus"], 0)
        if "generator" in sec:
            cfg.generator = sec["generator"].strip()
        if sec.get("a6"):
            cfg.a6 = int(sec["a6"], 16)
        if cfg.generator != "smallest-primitive":
            raise ValueError(f"unsupported generator rule {cfg.generator!r}")
        return cfg

    def build(self) -> GF4096:
        return GF4096(self.modulus, self.a6)


def fmt(x: int) -> str:
    return f"{x:03x}"


def parse_element(s: str) -> int:
    x = int(s, 16)
    if not 0 <= x < ORDER:
        raise ValueError(f"{s!r} is not a 12-bit field element")
    return x
