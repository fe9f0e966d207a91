from __future__ import annotations

import hashlib
import json

import pytest

from mw128.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from mw128.curve import format_poly
from mw128.search.complete import FastCompleter
from mw128.symmetry import basic_point, stab24_xi

FILTER = "x21=1;x17=0;x13=0;x9=0-3f"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == EXIT_OK and "FAIL" not in out


def test_selftest_alt_modulus(capsys):
    code, out, _ = run(capsys, "selftest", "--modulus", "1009")
    assert code == EXIT_OK and "0x1009" in out


def test_selftest_corrupted_table(capsys):
    code, out, _ = run(capsys, "selftest", "--corrupt-table", "--seed", "7")
    assert code == EXIT_FAIL
    assert "FAIL  exp(log(x)) = x" in out and "--seed 7" in out


def test_usage_errors(capsys):
    assert run(capsys, "selftest", "--modulus", "1001")[0] == EXIT_USAGE  # reducible
    assert run(capsys, "selmer-check", "1", "2")[0] == EXIT_USAGE
    assert run(capsys, "search", "--filter", "x5=1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == EXIT_USAGE


def test_find_basic_json(capsys):
    code, out, _ = run(capsys, "find-basic", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK
    assert d["height"] == 22 and d["on_curve"] and d["matches_symbolic_form"]
    assert d["x1^2+x1+1"] == 0 and d["x0^4+x0+x1"] == 0 and d["trace(x0^3)"] == 1
    assert d["manifest"]["modulus"] == "0x1053"


def test_find_basic_text(capsys):
    code, out, _ = run(capsys, "find-basic")
    assert out.startswith("x = t^22 + t^21 + t^20 + t^19 + t^18 + t^16 + t^14 + x1 t^12 + t^11")


def test_selmer_check(capsys):
    code, out, _ = run(capsys, "selmer-check", "1", "0", "0", "0", "0", "47", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and d["local"] == "solvable" and d["closed_forms_match"]
    code, out, _ = run(capsys, "selmer-check", "1", "0", "2", "0", "0", "0", "--format", "json")
    assert json.loads(out)["local"] == "obstructed at j0=31"


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--format", "json")
    d = json.loads(out)
    assert d["center_density"] == "11^64/2^124" and d["min_norm_lower_bound"] == 22
    assert d["kissing_from_reference_histogram"] == 218044170240


def test_verify_point(capsys, tmp_path, F):
    p = basic_point(F)
    f = tmp_path / "basic.txt"
    f.write_text(f"# explicit point\nx: {format_poly(p.x)}\ny: {format_poly(p.y)}\n")
    code, out, _ = run(capsys, "verify-point", str(f), "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and d["on_curve"] and d["height"] == 22 and d["stabilizer_order"] == 6
    assert d["selmer_member"]

    q = FastCompleter(F).point(stab24_xi(F, F.roots_of_unity(5)[1]))
    f.write_text(format_poly(q.x) + "\n")
    code, out, _ = run(capsys, "verify-point", str(f), "--format", "json")
    assert json.loads(out)["stabilizer_order"] == 24


def test_verify_point_rejections(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("000\n")
    assert run(capsys, "verify-point", str(f))[0] == EXIT_FAIL
    f.write_text("x: 001 002 0x\n")
    code, _, err = run(capsys, "verify-point", str(f))
    assert code == EXIT_USAGE and "line 1, column 12" in err
    f.write_text("001 001\n")  # x = 1 + t: y does not exist
    assert run(capsys, "verify-point", str(f))[0] == EXIT_FAIL


def digests(out_dir):
    return {n: hashlib.sha256((out_dir / n).read_bytes()).hexdigest()
            for n in ("orbits.txt", "histogram.tsv")}


def test_search_partial_and_resume(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    code, out, _ = run(capsys, "search", "--filter", FILTER, "--out", str(a))
    assert code == EXIT_OK and out.startswith("PARTIAL orbits=")
    ck = tmp_path / "run.ckpt"
    run(capsys, "search", "--filter", FILTER, "--checkpoint", str(ck), "--out", str(b))
    lines = ck.read_text().splitlines(keepends=True)
    ck.write_text("".join(lines[:1]))  # interrupted right after the header
    code, out2, _ = run(capsys, "search", "--filter", FILTER, "--checkpoint", str(ck),
                        "--threads", "2", "--out", str(b))
    assert code == EXIT_OK and out2 == out
    assert digests(a) == digests(b)
    man = json.loads((b / "manifest.json").read_text())
    assert man["outputs"] == digests(b) and man["modulus"] == "0x1053" and man["partial"]
    rows = [r for r in (a / "orbits.txt").read_text().splitlines() if not r.startswith("#")]
    assert rows == sorted(rows) and all(len(r.split()) == 10 for r in rows)


def test_search_corrupt_checkpoint(capsys, tmp_path):
    ck = tmp_path / "run.ckpt"
    run(capsys, "search", "--filter", "x21=1;x17=0;x13=0;x9=0-7", "--checkpoint", str(ck))
    ck.write_text(ck.read_text().replace('"batch": 0', '"batch": 1', 1))
    code, _, err = run(capsys, "search", "--filter", "x21=1;x17=0;x13=0;x9=0-7",
                       "--checkpoint", str(ck))
    assert code == EXIT_FAIL and "checksum" in err


def test_search_empty(capsys):
    code, out, _ = run(capsys, "search", "--filter", "x21=3")
    assert code == EXIT_OK and out.startswith("PARTIAL orbits=0 kissing=0 sum=0")
