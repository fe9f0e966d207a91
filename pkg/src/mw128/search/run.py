"""Driving the search over canonical cells: filters, workers, checkpoints."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from ..field import GF4096, fmt
from ..selmer import XiTuple
from . import engine as E
from . import kernels as K
from . import quadratic as Q
from .cells import Cell, canonical_cells

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = 1
CODE_VERSION = "mw128-search-1"
DEFAULT_BATCH = 256


class CheckpointError(RuntimeError):
    pass


@dataclass(frozen=True)
class CellFilter:
    """Each field restricts one coordinate; None means unrestricted."""
    x21: frozenset[int] | None = None
    x17_class: frozenset[int] | None = None
    x13: frozenset[int] | None = None
    x9: tuple[int, int] | None = None  # half-open range

    @property
    def is_total(self) -> bool:
        return self.x21 is None and self.x17_class is None and self.x13 is None and self.x9 is None

    def accepts(self, cell: Cell, x17_class: int) -> bool:
        if self.x21 is not None and cell.x21 not in self.x21:
            return False
        if self.x17_class is not None and x17_class not in self.x17_class:
            return False
        if self.x13 is not None and cell.x13 not in self.x13:
            return False
        if self.x9 is not None and not (self.x9[0] <= cell.x9 < self.x9[1]):
            return False
        return True

    def as_dict(self) -> dict:
        return {
            "x21": sorted(self.x21) if self.x21 is not None else None,
            "x17_class": sorted(self.x17_class) if self.x17_class is not None else None,
            "x13": sorted(self.x13) if self.x13 is not None else None,
            "x9": list(self.x9) if self.x9 is not None else None,
        }

    @classmethod
    def parse(cls, text: str | None) -> CellFilter:
        """Parse 'x21=1,8;x17=0;x13=0-f;x9=0-100' (hex values, ranges inclusive)."""
        if not text:
            return cls()
        kw: dict = {}
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            key, _, val = part.partition("=")
            key = key.strip()
            vals: set[int] = set()
            for item in val.split(","):
                lo, dash, hi = item.strip().partition("-")
                if dash:
                    vals.update(range(int(lo, 16), int(hi, 16) + 1))
                else:
                    vals.add(int(lo, 16))
            if key == "x21":
                kw["x21"] = frozenset(vals)
            elif key in ("x17", "x17_class"):
                kw["x17_class"] = frozenset(vals)
            elif key == "x13":
                kw["x13"] = frozenset(vals)
            elif key == "x9":
                kw["x9"] = (min(vals), max(vals) + 1)
            else:
                raise ValueError(f"unknown filter key {key!r}")
        return cls(**kw)


@dataclass
class SearchConfig:
    workers: int = 1
    checkpoint: Path | None = None
    filter: CellFilter = field(default_factory=CellFilter)
    output: Path | None = None
    batch_size: int = DEFAULT_BATCH
    # spot-check one (cell, x5) pair in 2^sample_shift against the brute
    # force residual; negative disables
    sample_shift: int = E.SAMPLE_SHIFT


class Survivor(NamedTuple):
    cell: int
    xi: XiTuple
    x0: int


@dataclass
class SearchReport:
    modulus: int
    a6: int
    filter: CellFilter
    cells: list[Cell]
    survivors: list[Survivor]
    stats: dict[str, int]
    elapsed: float = 0.0

    @property
    def partial(self) -> bool:
        return not self.filter.is_total

    @property
    def cell_survivor_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.survivors:
            out[s.cell] = out.get(s.cell, 0) + 1
        return out

    def weighted_xi_count(self) -> int:
        """Number of valid xi in the orbits of the searched cells."""
        by_index = {c.index: c for c in self.cells}
        return sum(by_index[i].weight * n for i, n in self.cell_survivor_counts.items())

    def kissing_from_weights(self) -> int:
        return 8 * self.weighted_xi_count()

    def summary(self) -> dict:
        return {
            "modulus": f"0x{self.modulus:x}",
            "a6": fmt(self.a6),
            "partial": self.partial,
            "label": "PARTIAL (filtered, not a total count)" if self.partial else "TOTAL",
            "filter": self.filter.as_dict(),
            "cells": len(self.cells),
            "survivors": len(self.survivors),
            "stats": self.stats,
        }


STAT_NAMES = (
    "prefix_fail", "x5_fail", "ab_zero", "pair", "empty", "tried", "sampled",
    "mismatch", "no_x0", "no_y0", "reject_low", "reject_19", "overflow",
)


def select_cells(F: GF4096, flt: CellFilter, T=None) -> list[Cell]:
    from .cells import x17_class

    cells = canonical_cells(F, T)
    return [c for c in cells if flt.accepts(c, x17_class(F, c.x21, c.x17) if c.x17 else 0)]


def _batch_arrays(cells: list[Cell]) -> np.ndarray:
    return np.array([[c.index, c.x21, c.x17, c.x13, c.x9] for c in cells], dtype=np.int64).reshape(-1, 5)


def search_cells(T, cells: list[Cell], sample_shift: int) -> tuple[list[tuple[int, int, int, int]], np.ndarray]:
    """Run the kernel over a list of cells; rows are (cell, x5, x1, x0)."""
    arr = _batch_arrays(cells)
    stats = np.zeros(E.N_STATS, dtype=np.int64)
    counts = np.zeros(len(cells), dtype=np.int64)
    cap = 1 << 14
    while True:
        stats[:] = 0
        surv = np.zeros((cap, 3), dtype=np.int64)
        total = E.search_batch(arr, T, Q.A_ARR, Q.B_ARR, sample_shift, surv, counts, stats)
        if stats[E.S_OVERFLOW] == 0:
            break
        cap *= 8
    rows = []
    pos = 0
    for c, n in zip(cells, counts):
        for k in range(int(n)):
            rows.append((c.index, int(surv[pos + k, 0]), int(surv[pos + k, 1]), int(surv[pos + k, 2])))
        pos += int(n)
    assert pos == total
    return rows, stats


# -- checkpoint file ----------------------------------------------------------------

def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _header(F: GF4096, cfg: SearchConfig, ncells: int) -> dict:
    return {
        "type": "header",
        "format": CHECKPOINT_FORMAT,
        "version": CODE_VERSION,
        "modulus": f"0x{F.modulus:x}",
        "a6": fmt(F.a6),
        "filter": cfg.filter.as_dict(),
        "cells": ncells,
        "batch": cfg.batch_size,
        "sample_shift": cfg.sample_shift,
    }


def _sealed(rec: dict) -> dict:
    rec = dict(rec)
    rec["sha256"] = _digest(rec)
    return rec


def read_checkpoint(path: Path, header: dict) -> dict[int, dict]:
    """Completed batches keyed by batch number; verifies every checksum.

    A final line without its newline is an interrupted write and is dropped.
    """
    text = path.read_text()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    elif lines:
        log.warning("dropping incomplete last checkpoint line")
        lines.pop()
        path.write_text("".join(line + "\n" for line in lines))
    if not lines:
        raise CheckpointError("checkpoint has no header")
    done: dict[int, dict] = {}
    for lineno, line in enumerate(lines, 1):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"line {lineno}: not JSON ({exc})") from None
        sha = rec.pop("sha256", None)
        if sha != _digest(rec):
            raise CheckpointError(f"line {lineno}: checksum mismatch")
        if lineno == 1:
            if rec != header:
                raise CheckpointError("checkpoint header does not match this run")
            continue
        if rec.get("type") != "batch":
            raise CheckpointError(f"line {lineno}: unexpected record type")
        done[rec["batch"]] = rec
    return done


def run_search(F: GF4096, cfg: SearchConfig, cells: list[Cell] | None = None) -> SearchReport:
    t0 = time.time()
    T = K.pack_tables(F)
    if cells is None:
        cells = select_cells(F, cfg.filter, T)
    batches = [cells[i : i + cfg.batch_size] for i in range(0, len(cells), cfg.batch_size)]
    header = _header(F, cfg, len(cells))

    done: dict[int, dict] = {}
    fh = None
    if cfg.checkpoint is not None:
        path = Path(cfg.checkpoint)
        if path.exists() and path.stat().st_size > 0:
            done = read_checkpoint(path, header)
            log.info("resuming: %d of %d batches already done", len(done), len(batches))
            fh = open(path, "a")
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            fh = open(path, "w")
            fh.write(json.dumps(_sealed(header), sort_keys=True) + "\n")
            fh.flush()

    todo = [b for b in range(len(batches)) if b not in done]

    def work(b: int) -> dict:
        rows, stats = search_cells(T, batches[b], cfg.sample_shift)
        return {
            "type": "batch",
            "batch": b,
            "first_cell": batches[b][0].index,
            "ncells": len(batches[b]),
            "survivors": [list(r) for r in rows],
            "stats": [int(v) for v in stats],
        }

    try:
        if cfg.workers <= 1:
            results = map(work, todo)
        else:
            pool = ThreadPoolExecutor(max_workers=cfg.workers)
            results = pool.map(work, todo)
        for k, rec in enumerate(results, 1):
            done[rec["batch"]] = rec
            if fh is not None:
                fh.write(json.dumps(_sealed(rec), sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            if k % 20 == 0 or k == len(todo):
                log.info("batch %d/%d (%.0fs)", len(done), len(batches), time.time() - t0)
        if cfg.workers > 1:
            pool.shutdown()
    finally:
        if fh is not None:
            fh.close()

    survivors: list[Survivor] = []
    stats = np.zeros(E.N_STATS, dtype=np.int64)
    by_index = {c.index: c for c in cells}
    for b in sorted(done):
        rec = done[b]
        stats += np.array(rec["stats"], dtype=np.int64)
        for ci, x5, x1, x0 in rec["survivors"]:
            c = by_index[ci]
            survivors.append(Survivor(ci, XiTuple(c.x21, c.x17, c.x13, c.x9, x5, x1), x0))
    survivors.sort()
    return SearchReport(
        F.modulus, F.a6, cfg.filter, cells, survivors,
        dict(zip(STAT_NAMES, (int(v) for v in stats))), time.time() - t0,
    )


def cells_containing(F: GF4096, prefixes: Iterable[tuple[int, int, int, int]]) -> list[Cell]:
    """The canonical cells whose prefix is in the given list."""
    want = set(prefixes)
    return [c for c in canonical_cells(F) if c.prefix in want]
