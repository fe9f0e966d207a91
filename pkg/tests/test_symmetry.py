from __future__ import annotations

from fractions import Fraction

import pytest

from mw128.curve import on_curve
from mw128.search.complete import FastCompleter
from mw128.symmetry import (
    GROUP_ORDER, IDENTITY, Automorphism, OrbitClosureError, Symmetry, basic_point,
    factorint, fixed_by_order5_scaling, inverse_stabilizer_sum, is_minimal,
    kissing_from_histogram, lattice_constants, orbit_partition, stab24_xi, xi_of_point,
)

REFERENCE_HISTOGRAM = {1: 2766, 2: 134, 3: 21, 4: 11, 6: 3, 8: 1, 12: 3, 24: 1}


@pytest.fixture(scope="module")
def sym(F):
    return Symmetry(F)


def test_identity_and_hyperelliptic(sym, F):
    p = basic_point(F)
    assert sym.apply(IDENTITY, p) == p
    q = sym.apply(Automorphism(c=0, d=1), p)
    assert q.x == p.x and q.y[0] == p.y[0] ^ 1 and q.y[1:] == p.y[1:]


def test_group_axioms(sym, sample_points, rng):
    for _ in range(60):
        p = rng.choice(sample_points)
        g, h, k = (sym.random_element(rng) for _ in range(3))
        gh = sym.compose(g, h)
        assert sym.apply(gh, p) == sym.apply(g, sym.apply(h, p))
        assert sym.compose(sym.compose(g, h), k) == sym.compose(g, sym.compose(h, k))
        gi = sym.inverse(g)
        assert sym.compose(g, gi) == IDENTITY and sym.compose(gi, g) == IDENTITY
        assert sym.compose(g, IDENTITY) == g


def test_closure_under_group(sym, F, sample_points, rng):
    for _ in range(100):
        p = rng.choice(sample_points)
        q = sym.apply(sym.random_element(rng), p)
        assert is_minimal(F, q)
        assert sym.canonical_form(xi_of_point(q)) == sym.canonical_form(xi_of_point(p))


def test_basic_point_stabilizer(sym, F):
    stab = sym.stabilizer(basic_point(F))
    assert len(stab) == 6
    assert {g.frob % 2 for g in stab} == {0}


def test_stab24_all_fifth_roots(sym, F):
    fc = FastCompleter(F)
    roots = [a for a in F.roots_of_unity(5) if a != 1]
    assert len(roots) == 4
    canon = set()
    for a in roots:
        p = fc.point(stab24_xi(F, a))
        stab = sym.stabilizer(p)
        assert len(stab) == 24
        assert max(sym.order_of(g) for g in stab) == 24  # cyclic
        canon.add(sym.canonical_with_stabilizer(stab24_xi(F, a)))
    assert len(canon) == 1 and next(iter(canon))[1] == 24


def test_stabilizer_conjugates(sym, sample_points, rng):
    for p in rng.sample(sample_points, 5):
        g = sym.random_element(rng)
        q = sym.apply(g, p)
        assert sym.stabilizer_order(q) == sym.stabilizer_order(p)


def test_point_and_xi_stabilizers_agree(sym, sample_points, rng):
    for p in rng.sample(sample_points, 10):
        assert sym.stabilizer_order(p) == sym.canonical_with_stabilizer(xi_of_point(p))[1]


def test_no_order5_fixed_points(F, sample_points):
    assert not any(fixed_by_order5_scaling(F, p) for p in sample_points)


def test_orbit_partition_closure_error(sym, F):
    xi = stab24_xi(F, F.roots_of_unity(5)[1])
    assert sym.canonical_form(xi) != xi
    with pytest.raises(OrbitClosureError):
        orbit_partition(sym, [xi], None)


def test_kissing_arithmetic():
    k = kissing_from_histogram(REFERENCE_HISTOGRAM)
    assert k.value == 218_044_170_240
    assert k.inverse_stabilizer_sum == Fraction(8531, 3)
    assert k.factorization == {2: 17, 3: 1, 5: 1, 13: 1, 19: 1, 449: 1}
    assert kissing_from_histogram({1: 1}).value == GROUP_ORDER == 76_677_120
    assert kissing_from_histogram({}).value == 0
    assert inverse_stabilizer_sum([]) == 0


def test_factorint():
    assert factorint(2**17 * 3 * 449) == {2: 17, 3: 1, 449: 1}
    assert factorint(97) == {97: 1}


def test_lattice_constants():
    lc = lattice_constants()
    assert lc.center_density == Fraction(11**64, 2**124)
    assert 97.403 <= lc.center_density_log2 <= 97.404
    assert lc.min_norm_bound(6) == 22 == lc.min_norm
    assert "not independently verified" in lc.as_dict()["discriminant_note"]


def test_sample_points_on_curve(F, sample_points):
    assert all(on_curve(F, p.x, p.y) for p in sample_points)
