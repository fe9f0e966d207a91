"""Command-line interface.

Exit status: 0 on success, 1 when an invariant or consistency check fails,
2 on usage errors (bad flags, malformed input files).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import random
import sys
import time
from pathlib import Path

from . import __version__
from .curve import (
    PolyFormatError, degree, eta_direct, eta_from_x, format_poly, height, on_curve,
    parse_poly, recover_y,
)
from .field import DEFAULT_MODULUS, GF4096, LinearizedMap, ReducibleModulusError, fmt, parse_element
from .selmer import (
    DESCENT_SCHEDULE, Obstructed, XiTuple, closed_forms, descend, is_selmer_member,
    local_solvability, selmer_rank_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("mw128")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


# -- helpers ------------------------------------------------------------------------

def build_field(args) -> GF4096:
    try:
        return GF4096(args.modulus, args.a6)
    except ReducibleModulusError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def manifest(F: GF4096, command: str, **extra) -> dict:
    m = {
        "modulus": f"0x{F.modulus:x}",
        "generator": fmt(F.generator),
        "a6": fmt(F.a6),
        "code_version": __version__,
        "command": command,
    }
    m.update(extra)
    return m


def emit(args, data: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    elif args.format == "tsv":
        for k, v in data.items():
            print(f"{k}\t{v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}")
    else:
        print("\n".join(text_lines))


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def parse_xi(values: list[str]) -> XiTuple:
    if len(values) != 6:
        raise UsageError("a xi tuple needs six hex elements: x21 x17 x13 x9 x5 x1")
    try:
        return XiTuple(*(parse_element(v) for v in values))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- selftest -----------------------------------------------------------------------

def selftest_checks(F: GF4096, seed: int, trials: int = 200):
    """Yields (name, ok, detail) for the field, solver and curve invariants."""
    rng = random.Random(seed)
    ok = all(F.exp[F.log[x]] == x for x in range(1, 4096))
    yield "exp(log(x)) = x", ok, ""
    ok = all(F.sq[F.sqrt_t[x]] == x for x in range(4096))
    yield "sqrt is the inverse of squaring", ok, ""
    ok = sum(F.trace(x) for x in range(4096)) == 2048 and F.trace(F.a6) == 1
    yield "trace is balanced and trace(a6) = 1", ok, ""
    bad = None
    for _ in range(trials):
        a, b, c = (rng.randrange(4096) for _ in range(3))
        if F.mul(a, b ^ c) != F.mul(a, b) ^ F.mul(a, c) or F.mul(a, F.mul(b, c)) != F.mul(F.mul(a, b), c):
            bad = (a, b, c)
            break
    yield "multiplication is associative and distributive", bad is None, f"witness {bad}" if bad else ""
    bad = None
    for _ in range(trials):
        c = rng.randrange(4096)
        r = F.artin_schreier_solve(c)
        if (r is None) != (F.trace(c) == 1) or (r and any(F.sq[y] ^ y != c for y in r)):
            bad = c
            break
    yield "Artin-Schreier solvable iff trace 0", bad is None, f"c = {bad}" if bad is not None else ""
    bad = None
    for _ in range(trials // 4):
        terms = {m: rng.randrange(4096) for m in rng.sample(range(12), 3)}
        L = LinearizedMap.additive(F, terms)
        v = L(rng.randrange(4096))
        sols = L.solve(v)
        if not sols or any(L(s) != v for s in sols) or len(sols) != len(L.kernel()):
            bad = terms
            break
    yield "linearized solver returns a full coset", bad is None, f"terms {bad}" if bad else ""
    bad = None
    for _ in range(trials // 10):
        x = [rng.randrange(4096) for _ in range(23)]
        if eta_from_x(F, x)[:67] != eta_direct(F, x)[:67]:
            bad = x
            break
    yield "eta convolution equals direct cube", bad is None, ""
    from .symmetry import basic_point

    p = basic_point(F)
    yield "explicit point lies on the curve", on_curve(F, p.x, p.y) and height(p.x) == 22, ""


def cmd_selftest(args) -> int:
    F = build_field(args)
    if args.corrupt_table:
        # test hook: break one log-table entry to check that failures surface
        x = 1 + args.seed % 4095
        F.log[x] = (F.log[x] + 1) % 4095
    failed = []
    lines = [f"field modulus 0x{F.modulus:x}, a6 {fmt(F.a6)}, seed {args.seed}"]
    results = {}
    for name, ok, detail in selftest_checks(F, args.seed):
        results[name] = ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            failed.append(name)
    if failed:
        lines.append(f"reproduce with: mw128 selftest --modulus 0x{F.modulus:x} --seed {args.seed}")
    emit(args, {"manifest": manifest(F, "selftest", seed=args.seed), "results": results,
                "failed": failed}, lines)
    return EXIT_FAIL if failed else EXIT_OK


# -- find-basic ------------------------------------------------------------------------

SIMPLE_X_SYMBOLIC = {
    22: "1", 21: "1", 20: "1", 19: "1", 18: "1", 16: "1", 14: "1", 12: "x1",
    11: "1", 10: "x1 + 1", 8: "x1", 6: "x1", 4: "x1 + 1", 2: "x1^2", 1: "x1^2", 0: "x0",
}


def find_basic(F: GF4096) -> dict:
    from .symmetry import basic_point

    w = min(v for v in F.subfield(2) if F.sq[v] ^ v == 1)
    x0 = min(v for v in range(4096) if F.pow(v, 4) ^ v == w)
    p = basic_point(F, w, x0)
    subst = {"1": 1, "x1": w, "x1 + 1": w ^ 1, "x1^2": F.sq[w], "x0": x0}
    x = list(p.x) + [0] * (23 - len(p.x))
    symbolic_ok = all(
        x[j] == subst[SIMPLE_X_SYMBOLIC[j]] if j in SIMPLE_X_SYMBOLIC else x[j] == 0
        for j in range(23)
    )
    return {
        "x1": w,
        "x0": x0,
        "x": p.x,
        "y": p.y,
        "height": height(p.x),
        "on_curve": on_curve(F, p.x, p.y),
        "x1^2+x1+1": F.sq[w] ^ w ^ 1,
        "x0^4+x0+x1": F.pow(x0, 4) ^ x0 ^ w,
        "trace(x0^3)": F.trace(F.pow(x0, 3)),
        "x0^3 is a fifth root of unity": F.pow(F.pow(x0, 3), 5) == 1,
        "matches_symbolic_form": symbolic_ok,
    }


def cmd_find_basic(args) -> int:
    F = build_field(args)
    r = find_basic(F)
    terms = []
    for j in sorted(SIMPLE_X_SYMBOLIC, reverse=True):
        coef = SIMPLE_X_SYMBOLIC[j]
        mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
        terms.append(mono if coef == "1" else (f"({coef}) {mono}".strip() if "+" in coef else f"{coef} {mono}".strip()))
    lines = [
        "x = " + " + ".join(terms),
        f"x1 = {fmt(r['x1'])}   x1^2 + x1 + 1 = {fmt(r['x1^2+x1+1'])}",
        f"x0 = {fmt(r['x0'])}   x0^4 + x0 + x1 = {fmt(r['x0^4+x0+x1'])}   trace(x0^3) = {r['trace(x0^3)']}",
        f"x coefficients (t^0 upward): {format_poly(r['x'])}",
        f"y coefficients (t^0 upward): {format_poly(r['y'])}",
        f"height = {r['height']}   on_curve = {r['on_curve']}   symbolic form matches = {r['matches_symbolic_form']}",
    ]
    data = dict(r, x=format_poly(r["x"]), y=format_poly(r["y"]), manifest=manifest(F, "find-basic"))
    emit(args, data, lines)
    ok = r["on_curve"] and r["height"] == 22 and r["matches_symbolic_form"] and not r["x1^2+x1+1"] \
        and not r["x0^4+x0+x1"] and r["trace(x0^3)"] == 1
    return EXIT_OK if ok else EXIT_FAIL


# -- selmer-check -------------------------------------------------------------------------

def cmd_selmer_check(args) -> int:
    F = build_field(args)
    if args.rank:
        rep = selmer_rank_report(F)
        data = dict(rep.as_dict(), manifest=manifest(F, "selmer-check --rank"))
        emit(args, data, [f"{k}: {v}" for k, v in rep.as_dict().items()])
        return EXIT_OK
    xi = parse_xi(args.xi)
    if xi.x21 == 0:
        raise UsageError("x21 must be nonzero")
    res = local_solvability(F, xi)
    st = descend(F, xi, 21)
    coeffs = {j: st.coeffs.get(j, 0) for j in sorted(st.coeffs, reverse=True)}
    data = {
        "xi": [fmt(v) for v in xi],
        "selmer_member": is_selmer_member(F, xi),
        "local": "solvable" if not isinstance(res, Obstructed) else f"obstructed at j0={res.j0}",
        "coefficients": {f"x{j}": fmt(v) for j, v in coeffs.items()},
        "x0^4+x0": fmt(st.x0_value) if st.x0_value is not None else None,
        "manifest": manifest(F, "selmer-check"),
    }
    if is_selmer_member(F, xi):
        cf = closed_forms(F, xi)
        data["closed_forms_match"] = all(st.coeffs.get(j) == v for j, v in cf.items())
    lines = [
        f"xi = {' '.join(data['xi'])}",
        f"Selmer member (x13 in GF(16)): {data['selmer_member']}",
        f"local solvability: {data['local']}",
        "coefficients: " + " ".join(f"{k}={v}" for k, v in data["coefficients"].items()),
    ]
    if "closed_forms_match" in data:
        lines.append(f"closed forms match descent: {data['closed_forms_match']}")
    emit(args, data, lines)
    return EXIT_FAIL if data.get("closed_forms_match") is False else EXIT_OK


# -- search -------------------------------------------------------------------------------

def write_orbit_file(path: Path, records, man: dict) -> None:
    from .curve import padded

    lines = [f"# {k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}"
             for k, v in man.items()]
    lines.append("# x21 x17 x13 x9 x5 x1 x0 y0 stabilizer orbit_size")
    for r in records:
        x0 = padded(r.representative.x, 23)[0]
        y0 = r.representative.y[0] if r.representative.y else 0
        lines.append(" ".join([*(fmt(v) for v in r.xi), fmt(x0), fmt(y0),
                               str(r.stabilizer_order), str(r.orbit_size)]))
    path.write_text("\n".join(lines) + "\n")


def read_orbit_file(path: Path) -> list[tuple[XiTuple, int]]:
    out = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 10:
            raise UsageError(f"{path}:{lineno}: expected 10 fields, got {len(parts)}")
        try:
            xi = XiTuple(*(parse_element(v) for v in parts[:6]))
            out.append((xi, int(parts[8])))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def run_full(F: GF4096, cfg, progress: bool = False):
    """run_search followed by orbit partitioning; returns (report, records)."""
    from .search.complete import FastCompleter
    from .search.run import run_search
    from .symmetry import Symmetry, orbit_partition

    report = run_search(F, cfg)
    sym = Symmetry(F)
    fc = FastCompleter(F)
    records = orbit_partition(sym, [s.xi for s in report.survivors], fc.point)
    return report, records


def cmd_search(args) -> int:
    from .search.run import CellFilter, CheckpointError, SearchConfig
    from .symmetry import (
        EXPECTED_STABILIZERS, OrbitClosureError, inverse_stabilizer_sum, kissing_number,
        stabilizer_histogram,
    )

    F = build_field(args)
    try:
        flt = CellFilter.parse(args.filter)
    except ValueError as exc:
        raise UsageError(f"bad --filter: {exc}") from None
    cfg = SearchConfig(
        workers=args.threads,
        checkpoint=Path(args.checkpoint) if args.checkpoint else None,
        filter=flt,
        sample_shift=args.sample_shift,
    )
    t0 = time.time()
    try:
        report, records = run_full(F, cfg)
    except (OrbitClosureError, CheckpointError) as exc:
        print(f"mw128: consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    hist = stabilizer_histogram(records)
    kn = kissing_number(records)
    s = inverse_stabilizer_sum(records)
    weights_kn = report.kissing_from_weights()
    label = "PARTIAL " if report.partial else ""
    summary = f"{label}orbits={len(records)} kissing={kn.value} sum={s}"
    problems = []
    if weights_kn != kn.value:
        problems.append(f"cell-weight count {weights_kn} differs from orbit count {kn.value}")
    if report.stats.get("mismatch"):
        problems.append(f"{report.stats['mismatch']} shortcut spot checks disagreed")
    odd = [k for k in hist if k not in EXPECTED_STABILIZERS]
    if odd:
        problems.append(f"unexpected stabilizer orders {odd}")
    man = manifest(F, "search", filter=flt.as_dict(), partial=report.partial,
                   threads=args.threads, seconds=round(time.time() - t0, 1))
    outputs = {}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        # digests cover the deterministic content only; timing stays in manifest.json
        det = {k: v for k, v in man.items() if k not in ("seconds", "threads")}
        write_orbit_file(out / "orbits.txt", records, det)
        (out / "histogram.tsv").write_text(
            "".join(f"# {k}: {v}\n" for k, v in det.items() if not isinstance(v, dict))
            + "stabilizer_order\torbit_count\n"
            + "".join(f"{k}\t{v}\n" for k, v in hist.items())
        )
        for name in ("orbits.txt", "histogram.tsv"):
            outputs[name] = sha256_file(out / name)
        man["outputs"] = outputs
        (out / "manifest.json").write_text(json.dumps(man, indent=2, sort_keys=True) + "\n")
    data = {
        "summary": summary,
        "orbits": len(records),
        "histogram": hist,
        "inverse_stabilizer_sum": str(s),
        "kissing_number": kn.value,
        "factorization": kn.factor_string(),
        "kissing_from_cell_weights": weights_kn,
        "search": report.summary(),
        "problems": problems,
        "manifest": man,
    }
    lines = [
        summary,
        f"factorization: {kn.factor_string()}",
        "stabilizer histogram: " + ", ".join(f"{k}:{v}" for k, v in hist.items()),
        f"cells searched: {len(report.cells)}  survivors: {len(report.survivors)}",
    ]
    lines += [f"PROBLEM: {p}" for p in problems]
    emit(args, data, lines)
    return EXIT_FAIL if problems else EXIT_OK


# -- verify-point --------------------------------------------------------------------------

def read_point_file(path: Path) -> tuple[list[int], list[int] | None]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    polys = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        label, offset = None, 0
        if ":" in body:
            label, body = body.split(":", 1)
            offset = len(label) + 1
            label = label.strip()
        try:
            polys.append((label, parse_poly(body, lineno)))
        except PolyFormatError as exc:
            raise UsageError(f"{path}: line {exc.line}, column {exc.col + offset}: "
                             f"{str(exc).split(': ', 1)[1]}") from None
    if not polys or len(polys) > 2:
        raise UsageError(f"{path}: expected an x line and an optional y line")
    x = polys[0][1]
    y = polys[1][1] if len(polys) == 2 else None
    return x, y


def cmd_verify_point(args) -> int:
    from .curve import MinimalPoint
    from .symmetry import Symmetry, xi_of_point

    F = build_field(args)
    x, y = read_point_file(Path(args.file))
    if degree(x) < 0:
        print("mw128: rejected: x is the zero polynomial", file=sys.stderr)
        return EXIT_FAIL
    if y is None:
        y = recover_y(F, eta_from_x(F, x))
    ok = y is not None and on_curve(F, x, y)
    data = {"on_curve": ok, "height": height(x), "manifest": manifest(F, "verify-point")}
    lines = [f"on_curve: {ok}", f"height: {height(x)}"]
    if ok and degree(x) == 22 and x[21] != 0:
        p = MinimalPoint(tuple(x), tuple(y))
        sym = Symmetry(F)
        xi = xi_of_point(p)
        member = is_selmer_member(F, xi)
        odd_matches = all(
            (x[j] if j < len(x) else 0) == v
            for j, v in enumerate(selmer_representative_odd(F, xi)) if j % 2
        )
        stab = sym.stabilizer_order(p)
        canon = sym.canonical_form(xi)
        data.update({
            "xi": [fmt(v) for v in xi],
            "selmer_member": member and odd_matches,
            "stabilizer_order": stab,
            "canonical_xi": [fmt(v) for v in canon],
        })
        lines += [
            f"xi: {' '.join(data['xi'])}",
            f"Selmer member: {data['selmer_member']}",
            f"stabilizer order: {stab}",
            f"canonical xi: {' '.join(data['canonical_xi'])}",
        ]
        if args.orbits:
            known = {c for c, _ in read_orbit_file(Path(args.orbits))}
            data["in_orbit_file"] = canon in known
            lines.append(f"orbit listed in {args.orbits}: {canon in known}")
    elif ok:
        lines.append("not a height-22 point with x21 != 0; orbit data skipped")
    emit(args, data, lines)
    return EXIT_OK if ok else EXIT_FAIL


def selmer_representative_odd(F: GF4096, xi: XiTuple) -> list[int]:
    from .selmer import selmer_polynomial

    return selmer_polynomial(F, xi)


# -- constants -----------------------------------------------------------------------------

def cmd_constants(args) -> int:
    from .symmetry import GROUP_ORDER, kissing_from_histogram, lattice_constants

    F = build_field(args)
    lc = lattice_constants()
    reference = {1: 2766, 2: 134, 3: 21, 4: 11, 6: 3, 8: 1, 12: 3, 24: 1}
    kn = kissing_from_histogram(reference)
    data = dict(lc.as_dict(), group_order=GROUP_ORDER,
                kissing_from_reference_histogram=kn.value,
                kissing_factorization=kn.factor_string(),
                manifest=manifest(F, "constants"))
    lines = [f"{k}: {v}" for k, v in lc.as_dict().items()]
    lines.append(f"group_order: {GROUP_ORDER}")
    lines.append(f"kissing number from the reference histogram: {kn.value} = {kn.factor_string()}")
    emit(args, data, lines)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------------

def hex_int(s: str) -> int:
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex number: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modulus", type=hex_int, default=DEFAULT_MODULUS,
                        help="field modulus as hex, degree 12 (default 0x1053)")
    common.add_argument("--a6", type=hex_int, default=None,
                        help="trace-1 constant a6 as hex (default: smallest trace-1 element)")
    common.add_argument("--format", choices=("text", "json", "tsv"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="mw128", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("selftest", parents=[common], help="field, solver and curve self checks")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("find-basic", parents=[common], help="the explicit minimal point")
    s.set_defaults(func=cmd_find_basic)

    s = sub.add_parser("selmer-check", parents=[common], help="descent for one xi tuple")
    s.add_argument("xi", nargs="*", help="x21 x17 x13 x9 x5 x1 in hex")
    s.add_argument("--rank", action="store_true", help="print the Selmer rank report instead")
    s.set_defaults(func=cmd_selmer_check)

    s = sub.add_parser("search", parents=[common], help="enumerate all minimal points")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--checkpoint", help="checkpoint file (resumed if present)")
    s.add_argument("--filter", help="e.g. 'x21=1;x17=0;x13=0-f;x9=0-ff' (hex, inclusive ranges)")
    s.add_argument("--out", help="directory for orbits.txt, histogram.tsv, manifest.json")
    s.add_argument("--sample-shift", type=int, default=16,
                   help="spot-check one (cell, x5) pair in 2^N against brute force (-1 disables)")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify-point", parents=[common], help="check a point given in a file")
    s.add_argument("file")
    s.add_argument("--orbits", help="orbit file from 'search --out' to look the point up in")
    s.set_defaults(func=cmd_verify_point)

    s = sub.add_parser("constants", parents=[common], help="lattice constants")
    s.set_defaults(func=cmd_constants)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(message)s",
    )
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mw128: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckFailed as exc:
        print(f"mw128: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
