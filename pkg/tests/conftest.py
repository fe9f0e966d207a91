from __future__ import annotations

import random

import pytest

from mw128.field import ALT_MODULUS, DEFAULT_MODULUS, GF4096


@pytest.fixture(scope="session")
def F() -> GF4096:
    return GF4096(DEFAULT_MODULUS)


@pytest.fixture(scope="session")
def F_alt() -> GF4096:
    return GF4096(ALT_MODULUS)


@pytest.fixture(scope="session", params=[DEFAULT_MODULUS, ALT_MODULUS], ids=["0x1053", "0x1009"])
def FF(request) -> GF4096:
    return GF4096(request.param)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


@pytest.fixture(scope="session")
def T(F):
    from mw128.search import kernels as K

    return K.pack_tables(F)


SAMPLE_FILTER = "x21=1;x17=0"


@pytest.fixture(scope="session")
def sample_points(F):
    """Minimal points from a small filtered search plus the two named points."""
    from mw128.search.complete import FastCompleter
    from mw128.search.run import CellFilter, SearchConfig, run_search
    from mw128.symmetry import basic_point, stab24_xi

    rep = run_search(F, SearchConfig(filter=CellFilter.parse(SAMPLE_FILTER)))
    fc = FastCompleter(F)
    pts = [fc.point(s.xi) for s in rep.survivors]
    pts.append(basic_point(F))
    pts.append(fc.point(stab24_xi(F, F.roots_of_unity(5)[1])))
    return pts


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
