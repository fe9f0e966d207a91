from __future__ import annotations

import json

import pytest

from mw128.search.complete import FastCompleter
from mw128.search.run import (
    CellFilter, CheckpointError, SearchConfig, cells_containing, run_search, select_cells,
)
from mw128.symmetry import Symmetry, orbit_partition

SMALL = "x21=1;x17=0;x13=0;x9=0-3f"


def report_key(rep):
    return (rep.survivors, rep.stats, [c.prefix for c in rep.cells])


@pytest.fixture(scope="module")
def small_report(F):
    return run_search(F, SearchConfig(filter=CellFilter.parse(SMALL), batch_size=4))


def test_filter_parse():
    f = CellFilter.parse("x21=1,8;x17=1;x13=0-f;x9=10-1f")
    assert f.x21 == {1, 8} and f.x17_class == {1} and f.x13 == frozenset(range(16))
    assert f.x9 == (0x10, 0x20) and not f.is_total
    assert CellFilter.parse(None).is_total and CellFilter.parse("").is_total
    with pytest.raises(ValueError):
        CellFilter.parse("x5=0")


def test_partial_label(small_report):
    assert small_report.partial
    assert small_report.summary()["label"].startswith("PARTIAL")


def test_empty_filter_gives_empty_report(F):
    rep = run_search(F, SearchConfig(filter=CellFilter.parse("x21=3")))  # 3 is not a coset rep
    assert rep.cells == [] and rep.survivors == []
    assert orbit_partition(Symmetry(F), [], None) == []


def test_survivors_complete(F, small_report):
    fc = FastCompleter(F)
    assert small_report.survivors
    for s in small_report.survivors:
        p = fc.point(s.xi)
        assert p.x[0] == s.x0


def test_no_shortcut_mismatches(F):
    rep = run_search(F, SearchConfig(filter=CellFilter.parse("x21=1;x17=0;x13=0;x9=0-7"),
                                     sample_shift=0))
    expect = len(rep.cells) * 4096 - rep.stats["x5_fail"] - rep.stats["prefix_fail"] * 4096
    assert rep.cells and rep.stats["sampled"] == expect
    assert rep.stats["mismatch"] == 0


def test_basic_cell_has_stabilizer_6_orbit(F):
    cells = cells_containing(F, [(1, 0, 0, 0)])
    assert len(cells) == 1
    rep = run_search(F, SearchConfig(), cells=cells)
    sym = Symmetry(F)
    in_cell = [s.xi for s in rep.survivors]
    stabs = {sym.canonical_with_stabilizer(xi)[1] for xi in in_cell
             if xi[:4] == (1, 0, 0, 0) and F.sq[xi.x1] ^ xi.x1 == 1}
    assert stabs == {6}


def test_worker_count_does_not_change_report(F, small_report):
    rep2 = run_search(F, SearchConfig(filter=CellFilter.parse(SMALL), batch_size=4, workers=3))
    assert report_key(rep2) == report_key(small_report)


def test_checkpoint_resume_is_identical(F, small_report, tmp_path):
    ck = tmp_path / "run.ckpt"
    cfg = SearchConfig(filter=CellFilter.parse(SMALL), batch_size=4, checkpoint=ck)
    run_search(F, cfg)
    lines = ck.read_text().splitlines(keepends=True)
    # simulate an interrupt: keep three batches plus a torn write
    ck.write_text("".join(lines[:4]) + lines[4][:25])
    rep = run_search(F, cfg)
    assert report_key(rep) == report_key(small_report)
    assert ck.read_text().count("\n") == len(lines)


def test_checkpoint_corruption_detected(F, tmp_path):
    ck = tmp_path / "run.ckpt"
    cfg = SearchConfig(filter=CellFilter.parse(SMALL), batch_size=4, checkpoint=ck)
    run_search(F, cfg)
    lines = ck.read_text().splitlines(keepends=True)
    rec = json.loads(lines[2])
    rec["stats"][5] += 1
    lines[2] = json.dumps(rec, sort_keys=True) + "\n"
    ck.write_text("".join(lines))
    with pytest.raises(CheckpointError, match="checksum"):
        run_search(F, cfg)


def test_checkpoint_from_other_run_rejected(F, F_alt, tmp_path):
    ck = tmp_path / "run.ckpt"
    run_search(F, SearchConfig(filter=CellFilter.parse("x21=1;x17=0;x13=0;x9=0-3"), checkpoint=ck))
    with pytest.raises(CheckpointError, match="header"):
        run_search(F, SearchConfig(filter=CellFilter.parse("x21=1;x17=0;x13=0;x9=0-4"), checkpoint=ck))
    with pytest.raises(CheckpointError, match="header"):
        run_search(F_alt, SearchConfig(filter=CellFilter.parse("x21=1;x17=0;x13=0;x9=0-3"),
                                       checkpoint=ck))


def test_select_cells_filter(F):
    cells = select_cells(F, CellFilter.parse("x21=1;x17=1;x13=1"))
    assert cells and all(c.x21 == 1 and c.x13 == 1 and c.x17 for c in cells)
