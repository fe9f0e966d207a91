"""Polynomials over k and the curve y^2 + y = x^3 + t^65 + a6.

Polynomials are lists of field elements indexed by degree (index j holds the
coefficient of t^j). Trailing zeros are allowed everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import GF4096, fmt, parse_element

X_DEG = 22
Y_DEG = 33
ETA_LEN = 67  # eta_0 .. eta_66
T_EXP = 65


@dataclass(frozen=True)
class MinimalPoint:
    x: tuple[int, ...]
    y: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(trim(self.x)))
        object.__setattr__(self, "y", tuple(trim(self.y)))


def trim(p) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    """Degree of p; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def padded(p, n: int) -> list[int]:
    p = trim(p)
    if len(p) > n:
        raise ValueError(f"polynomial of degree {len(p) - 1} does not fit in {n}")
    return p + [0] * (n - len(p))


def poly_add(p, q) -> list[int]:
    n = max(len(p), len(q))
    p, q = list(p) + [0] * (n - len(p)), list(q) + [0] * (n - len(q))
    return [a ^ b for a, b in zip(p, q)]


def poly_mul(F: GF4096, p, q) -> list[int]:
    if not p or not q:
        return []
    r = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    r[i + j] ^= F.mul(a, b)
    return r


def poly_square(F: GF4096, p) -> list[int]:
    """p^2 = sum p_j^2 t^(2j) in characteristic 2."""
    r = [0] * max(2 * len(p) - 1, 0)
    for j, a in enumerate(p):
        r[2 * j] = F.sq[a]
    return r


def rhs_constant(F: GF4096) -> list[int]:
    """t^65 + a6."""
    c = [0] * (T_EXP + 1)
    c[0] = F.a6
    c[T_EXP] = 1
    return c


def eta_from_x(F: GF4096, x) -> list[int]:
    """Coefficients of x^3 + t^65 + a6 via eta_j = sum_{j1+2*j2=j} x_j1 x_j2^2."""
    x = trim(x)
    n = max(3 * len(x) - 2, ETA_LEN)
    eta = [0] * n
    sq = F.sq
    for j2, b in enumerate(x):
        if not b:
            continue
        b2 = sq[b]
        base = 2 * j2
        for j1, a in enumerate(x):
            if a:
                eta[base + j1] ^= F.mul(a, b2)
    eta[0] ^= F.a6
    eta[T_EXP] ^= 1
    return eta


def eta_direct(F: GF4096, x) -> list[int]:
    """Same series via repeated polynomial multiplication (independent path)."""
    x = trim(x)
    cube = poly_mul(F, poly_mul(F, x, x), x)
    out = poly_add(cube, rhs_constant(F))
    return out + [0] * max(0, ETA_LEN - len(out))


def eta_condition(F: GF4096, eta, j0: int) -> int:
    """sum_m (eta_{2^m j0})^(2^-m); zero iff the j0 condition holds."""
    if j0 <= 0 or j0 % 2 == 0:
        raise ValueError(f"j0 must be odd and positive, got {j0}")
    s = 0
    j = j0
    m = 0
    while j < len(eta):
        if eta[j]:
            s ^= F.frob_pow(eta[j], -m)
        j <<= 1
        m += 1
    return s


def recover_y(F: GF4096, eta) -> list[int] | None:
    """Solve y^2 + y = eta over k[t]; returns the smaller of the two lifts.

    Top-down on coefficients: eta_j = y_j + y_{j/2}^2 [j even] for j > 0, with
    y_j = 0 above deg(eta)/2. Each y_j (j > 0) is fixed at step 2j and checked
    at step j when j is odd.
    """
    eta = trim(eta)
    if not eta:
        return [0]
    top = len(eta) - 1
    if top % 2:
        return None
    ydeg = top // 2
    y = [0] * (ydeg + 1)
    for j in range(top, 0, -1):
        yj = y[j] if j <= ydeg else 0
        if j % 2 == 0:
            y[j // 2] = F.sqrt_t[eta[j] ^ yj]
        elif eta[j] != yj:
            return None
    roots = F.artin_schreier_solve(eta[0])
    if roots is None:
        return None
    y[0] = roots[0]
    return y


def on_curve(F: GF4096, x, y) -> bool:
    lhs = poly_add(poly_square(F, list(y)), list(y))
    rhs = poly_add(poly_mul(F, poly_mul(F, list(x), list(x)), list(x)), rhs_constant(F))
    return trim(lhs) == trim(rhs)


def height(x) -> int:
    d = degree(x)
    if d < 0:
        raise ValueError("height is undefined for x = 0")
    return d


def minimal_point(F: GF4096, x) -> MinimalPoint | None:
    """The canonical lift (x, y) if x is the x-coordinate of a point."""
    y = recover_y(F, eta_from_x(F, x))
    if y is None:
        return None
    return MinimalPoint(tuple(x), tuple(y))


# -- text format: hex coefficients from degree 0 upward ------------------------

def format_poly(p) -> str:
    p = trim(p)
    return " ".join(fmt(c) for c in p) if p else "000"


class PolyFormatError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


def parse_poly(text: str, line: int = 1) -> list[int]:
    out = []
    col = 1
    for tok in text.split(" "):
        if tok:
            try:
                out.append(parse_element(tok))
            except ValueError:
                raise PolyFormatError(line, col, f"bad coefficient {tok!r}") from None
        col += len(tok) + 1
    if not out:
        raise PolyFormatError(line, 1, "empty polynomial")
    return out
