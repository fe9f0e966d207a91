from __future__ import annotations

import pytest

from mw128.selmer import (
    DESCENT_SCHEDULE, DescentState, Obstructed, Solvable, XiTuple, closed_form_check, closed_forms,
    condition_value, derive_coefficient, descend, is_selmer_member, local_solvability,
    selmer_polynomial, selmer_rank_report,
)


def random_xi(F, rng, member=True):
    x13 = rng.choice(F.subfield(4)) if member else rng.choice(
        [v for v in range(4096) if not F.in_subfield(v, 4)])
    return XiTuple(rng.randrange(1, 4096), rng.randrange(4096), x13,
                   rng.randrange(4096), rng.randrange(4096), rng.randrange(4096))


def test_selmer_polynomial_examples(F):
    p = selmer_polynomial(F, XiTuple(1, 0, 0, 0, 0, 0))
    assert [j for j, v in enumerate(p) if v] == [11, 19, 21]
    assert not any(selmer_polynomial(F, XiTuple(0, 0, 0, 0, 0, 0)))


def test_selmer_polynomial_linear(F, rng):
    for _ in range(50):
        a, b = random_xi(F, rng), random_xi(F, rng)
        s = XiTuple(*(u ^ v for u, v in zip(a, b)))
        pa, pb, ps = (selmer_polynomial(F, t) for t in (a, b, s))
        n = max(len(pa), len(pb), len(ps))
        pad = lambda p: list(p) + [0] * (n - len(p))  # noqa: E731
        assert [u ^ v for u, v in zip(pad(pa), pad(pb))] == pad(ps)


def test_membership(F):
    assert is_selmer_member(F, XiTuple(1, 0, 1, 0, 0, 0))
    assert not is_selmer_member(F, XiTuple(1, 0, F.generator, 0, 0, 0))


def test_schedule_examples(F, rng):
    for _ in range(50):
        xi = random_xi(F, rng)
        st = descend(F, xi, 47)
        assert not st.obstructed
        x21 = xi.x21
        assert F.mul(F.sq[st.coeffs[22]], x21) == 1  # x22 = x21^(-1/2)
        assert st.coeffs[19] == F.pow(x21, 4)
        assert st.coeffs[11] == F.pow(x21, 16)
        assert st.coeffs[15] == 0 and st.coeffs[7] == 0
        assert st.coeffs[3] == F.pow(xi.x17, 4)
    assert DESCENT_SCHEDULE[65] == 22 and DESCENT_SCHEDULE[47] == 3


def test_j23_passes_for_any_x21(F, rng):
    for _ in range(30):
        xi = random_xi(F, rng)
        st = descend(F, xi, 25)
        if st.obstructed:
            continue
        derive_coefficient(F, st, 23)
        assert st.obstructed_at != 23


def test_basic_tuple_coefficients(F):
    st = descend(F, XiTuple(1, 0, 0, 0, 0, 0), 47)
    c = st.coeffs
    assert (c[20], c[18], c[16], c[14], c[3]) == (1, 1, 1, 1, 0)


def test_closed_forms_random(F, rng):
    for _ in range(200):
        assert closed_form_check(F, random_xi(F, rng))


def test_local_solvability(F, rng):
    assert local_solvability(F, XiTuple(1, 0, 0, 0, 0, 0)) == Solvable()
    for _ in range(100):
        assert local_solvability(F, random_xi(F, rng)) == Solvable()
        assert local_solvability(F, random_xi(F, rng, member=False)) == Obstructed(31)


def test_descend_requires_x21(F):
    with pytest.raises(ValueError):
        descend(F, XiTuple(0, 1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        derive_coefficient(F, DescentState.from_xi(XiTuple(1, 0, 0, 0, 0, 0)), 64)


def test_descent_zeroes_each_condition(F, rng):
    xi = random_xi(F, rng)
    st = descend(F, xi, 23)
    for j0 in range(65, 22, -2):
        assert condition_value(F, st.coeffs, j0) == 0


def test_rank_report():
    r = selmer_rank_report()
    assert r.total == 64 and r.order == 2**64
    d = r.as_dict()
    assert d["discriminant"] == "2^120" and "derived" in d["discriminant_note"]


def test_closed_forms_keys(F):
    assert set(closed_forms(F, XiTuple(1, 0, 0, 0, 0, 0))) == {22, 19, 20, 15, 18, 11, 16, 7, 14, 3}
