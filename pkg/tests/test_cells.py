from __future__ import annotations

from collections import Counter

import pytest

from mw128.search.cells import (
    XI_GROUP_ORDER, canonical_cells, cell_tables, prefix_space_size, x17_class,
)
from mw128.selmer import XiTuple
from mw128.symmetry import Symmetry


@pytest.fixture(scope="module")
def cells(F, T):
    return canonical_cells(F, T)


def test_coset_reps(F):
    ct = cell_tables(F)
    assert len(ct.reps) == 21
    assert all(F.in_subfield(r, 6) for r in ct.reps)


def test_triple_layer(F, cells):
    ct = cell_tables(F)
    layer = {(int(r), cls, int(x13)) for r in ct.reps for cls in (0, 1) for x13 in ct.gf16}
    assert len(layer) == 21 * 2 * 16 == 672
    # Frobenius folds the layer further, so canonical cells use a subset of it
    triples = {(c.x21, x17_class(F, c.x21, c.x17), c.x13) for c in cells}
    assert triples <= layer


def test_cell_count_and_weights(cells):
    assert len(cells) == 115_560
    # slightly above the free quotient 21 * 2^17 / 24
    assert 21 * 2**17 / 24 < len(cells) < 1.2 * 21 * 2**17 / 24
    assert sum(c.weight for c in cells) == prefix_space_size()
    assert Counter(c.stabilizer for c in cells) == {
        1: 113883, 2: 1535, 3: 63, 4: 52, 6: 15, 8: 4, 12: 4, 24: 4}
    assert XI_GROUP_ORDER == 65 * 4096 * 3 * 12


def test_cells_are_canonical_and_sorted(F, cells, rng):
    sym = Symmetry(F)
    assert [c.index for c in cells] == list(range(len(cells)))
    assert [c.prefix for c in cells] == sorted(c.prefix for c in cells)
    for c in rng.sample(cells, 100):
        # the prefix part of the canonical form of any completion is the cell itself
        xi = XiTuple(*c.prefix, rng.randrange(4096), rng.randrange(4096))
        assert sym.canonical_form(xi)[:4] == c.prefix


def test_x17_values(F, cells):
    for c in cells[:2000]:
        assert c.x17 in (0, F.mul(F.pow(c.x21, 7), F.a6))


def test_translation_shift_on_x17(F, rng):
    # t -> t + b moves x17 by b^4 x21 + b^2 x21^4 = x21^7 (u^2 + u), u = b^2 / x21^3
    for _ in range(100):
        x21, b = rng.randrange(1, 4096), rng.randrange(4096)
        u = F.div(F.sq[b], F.pow(x21, 3))
        lhs = F.mul(F.pow(b, 4), x21) ^ F.mul(F.sq[b], F.pow(x21, 4))
        assert lhs == F.mul(F.pow(x21, 7), F.sq[u] ^ u)


def test_alternate_modulus_has_same_cell_statistics(F_alt):
    cells = canonical_cells(F_alt)
    assert len(cells) == 115_560
    assert sum(c.weight for c in cells) == prefix_space_size()
