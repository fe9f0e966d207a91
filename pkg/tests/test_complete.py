from __future__ import annotations

import pytest

from mw128.curve import on_curve
from mw128.search.complete import Accepted, FastCompleter, Rejected, all_completions, complete_candidate
from mw128.selmer import XiTuple
from mw128.symmetry import basic_x, stab24_xi


def test_basic_tuple_accepted(FF):
    for x1 in (v for v in FF.subfield(2) if FF.sq[v] ^ v == 1):
        r = complete_candidate(FF, XiTuple(1, 0, 0, 0, 0, x1))
        assert isinstance(r, Accepted) and r.multiplicity == 8
        x = r.point.x
        assert on_curve(FF, r.point.x, r.point.y)
        x0 = x[0]
        w = FF.sqrt(x1)  # the t coefficient is w^2 in the explicit form
        assert FF.pow(x0, 4) ^ x0 == w
        assert list(x) == basic_x(FF, w, x0)


def test_basic_tuple_with_zero_x1_rejected_at_19(FF):
    assert complete_candidate(FF, XiTuple(1, 0, 0, 0, 0, 0)) == Rejected(19)


def test_x13_gate(F):
    assert complete_candidate(F, XiTuple(1, 0, F.generator, 0, 0, 0)) == Rejected("x13")
    with pytest.raises(ValueError):
        complete_candidate(F, XiTuple(0, 0, 0, 0, 0, 0))


def test_fast_path_agrees(F, T, rng):
    fc = FastCompleter(F, T)
    for _ in range(200):
        xi = XiTuple(rng.randrange(1, 4096), rng.randrange(4096), rng.choice(F.subfield(4)),
                     rng.randrange(4096), rng.randrange(4096), rng.randrange(4096))
        assert fc(xi) == complete_candidate(F, xi)
    xi = stab24_xi(F, F.roots_of_unity(5)[1])
    assert fc(xi) == complete_candidate(F, xi)
    assert isinstance(fc(xi), Accepted)


def test_quaternion_partners_all_on_curve(F):
    r = complete_candidate(F, stab24_xi(F, F.roots_of_unity(5)[1]))
    pts = all_completions(F, r.point)
    assert len(set(pts)) == 8
    assert all(on_curve(F, p.x, p.y) for p in pts)
    assert r.point in pts
