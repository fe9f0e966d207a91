from __future__ import annotations

import random

import pytest

from mw128.field import (
    GF4096, LinearizedMap, ReducibleModulusError, FieldConfig, fmt, parse_element, schoolbook_mul,
)


def test_generator_order(FF):
    g = FF.generator
    assert FF.pow(g, 4095) == 1
    assert FF.order(g) == 4095


def test_inverse(FF):
    for x in range(1, 4096):
        assert FF.mul(x, FF.inv(x)) == 1


def test_log_tables_against_schoolbook(FF, rng):
    for _ in range(10_000):
        x, y = rng.randrange(1, 4096), rng.randrange(1, 4096)
        assert FF.exp[(FF.log[x] + FF.log[y]) % 4095] == schoolbook_mul(x, y, FF.modulus)
    assert FF.mul(0, 5) == 0 and FF.mul(7, 0) == 0


def test_trace_basics(FF):
    assert FF.trace(0) == 0
    assert FF.trace(1) == 0
    assert sum(FF.trace(x) for x in range(4096)) == 2048
    for x, y in [(3, 5), (100, 2000), (4095, 1)]:
        assert FF.trace(x ^ y) == FF.trace(x) ^ FF.trace(y)


def test_pick_a6(FF):
    assert FF.trace(FF.pick_a6()) == 1
    assert GF4096(FF.modulus).pick_a6() == FF.pick_a6()
    assert FF.pick_a6() == min(x for x in range(4096) if FF.trace(x) == 1)


def test_frobenius(FF, rng):
    for _ in range(200):
        x = rng.randrange(4096)
        assert FF.frob_pow(x, 12) == x
        assert FF.sq[FF.frob_pow(x, -1)] == x
        assert FF.frob_pow(FF.frob_pow(x, 5), -5) == x


def test_artin_schreier_kernel_and_obstruction(FF, rng):
    L = LinearizedMap.additive(FF, {1: 1, 0: 1})
    assert sorted(L.solve(0)) == [0, 1]
    for _ in range(100):
        v = rng.randrange(4096)
        sols = L.solve(v)
        assert (not sols) == (FF.trace(v) == 1)


def test_frobenius_4_kernel_is_gf4(FF, rng):
    L = LinearizedMap.additive(FF, {2: 1, 0: 1})
    assert sorted(L.kernel()) == sorted(FF.subfield(2))
    for _ in range(100):
        v = L(rng.randrange(4096))
        sols = L.solve(v)
        assert len(sols) == 4 and all(L(s) == v for s in sols)


def test_artin_schreier_solve(FF):
    assert sorted(FF.artin_schreier_solve(0)) == [0, 1]
    assert FF.artin_schreier_solve(FF.a6) is None
    for c in range(4096):
        r = FF.artin_schreier_solve(c)
        if r is not None:
            assert all(FF.sq[y] ^ y == c for y in r)


def test_roots_of_unity(FF):
    r65 = FF.roots_of_unity(65)
    assert len(r65) == 65 and all(FF.pow(a, 65) == 1 for a in r65)
    r3 = FF.roots_of_unity(3)
    assert sorted(r3) == sorted(x for x in FF.subfield(2) if x) and FF.roots_of_unity(1) == [1]


def test_subfields(FF):
    assert len(FF.subfield(4)) == 16
    assert FF.in_subfield(1, 4)
    assert not FF.in_subfield(FF.generator, 4)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulusError):
        GF4096(0x1001)  # t^12 + 1 = (t^3 + 1)^4
    with pytest.raises(ValueError):
        GF4096(0x53)


def test_bad_a6_rejected():
    with pytest.raises(ValueError):
        GF4096(a6=1)


def test_field_config(tmp_path):
    p = tmp_path / "field.ini"
    p.write_text("[field]\nmodulus = 0x1009\n")
    F = FieldConfig.read(p).build()
    assert F.modulus == 0x1009 and F.trace(F.a6) == 1


def test_hex_roundtrip():
    for x in (0, 1, 0xabc, 4095):
        assert parse_element(fmt(x)) == x
    with pytest.raises(ValueError):
        parse_element("1000")
    with pytest.raises(ValueError):
        parse_element("xyz")
