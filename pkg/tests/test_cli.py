import csv
import dataclasses
import io
import json
import shutil
import subprocess

import pytest

from hypercm import cli, count
from hypercm import curves as cv
from hypercm.cmcrit import CMVerdict


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_classify_formats(capsys):
    code, out = run(capsys, "classify", "--format", "json")
    assert code == cli.EXIT_OK
    recs = json.loads(out.out)
    assert [r["id"] for r in recs] == cv.CURVE_IDS
    assert all(r["derived"] for r in recs)
    code, out = run(capsys, "classify", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert len(rows) == 18 and list(rows[0])[:3] == ["id", "Gbar", "genus"]
    code, out = run(capsys, "classify")
    assert out.out.splitlines()[0].startswith("id")


@pytest.mark.parametrize("g", [2, 3])
def test_classify_family_genus(capsys, g):
    code, out = run(capsys, "classify", "--genus", str(g), "--format", "json")
    assert code == 0
    recs = {r["id"]: r for r in json.loads(out.out)}
    assert recs["X1"]["genus"] == g
    assert recs["X3"]["genus"] == max(g, 3)


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--genus", "1"],
        ["streit", "X19"],
        ["frobenius", "X10", "--primes", "3x"],
        ["frobenius", "X6"],
        ["bogus"],
        ["verdict", "--format", "xml"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(argv))
    assert exc.value.code == cli.EXIT_USAGE


def test_streit_and_quotient(capsys):
    code, out = run(capsys, "streit", "X5", "--format", "json")
    assert code == 0 and json.loads(out.out)[0]["inner_product"] == 0
    code, out = run(capsys, "quotient", "X6", "--format", "json")
    rec = json.loads(out.out)[0]
    assert code == 0 and rec["j_invariant"] == "35152/9" and rec["j_integral"] is False


def test_frobenius_exit_codes(capsys):
    code, out = run(capsys, "frobenius", "X10", "--format", "csv", "--no-cache")
    assert code == cli.EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert [r["p"] for r in rows] == ["37", "61", "157"]
    assert {r["verdict"] for r in rows} == {"no-CM"}
    code, _ = run(capsys, "frobenius", "X10", "--primes", "37", "--no-cache")
    assert code == cli.EXIT_INCONCLUSIVE


def test_mismatch_exit_code(capsys, monkeypatch):
    real = cv.get_curve

    def flipped(cid, g=None):
        c = real(cid, g)
        return dataclasses.replace(c, expected="no CM") if cid == "X14" else c

    monkeypatch.setattr(cv, "get_curve", flipped)
    code, out = run(capsys, "verdict", "X14", "--format", "json")
    assert code == cli.EXIT_MISMATCH
    assert json.loads(out.out)[0]["match"] is False


def test_x18_substitution_does_not_fail_the_run():
    sub = CMVerdict("X18", "inconclusive", "frobenius", {"listed_primes": [{"p": 131}]}, "no CM")
    other = CMVerdict("X11", "inconclusive", "frobenius", {}, "no CM")
    assert cli._merge_status(cli.EXIT_OK, sub) == cli.EXIT_OK
    assert cli._merge_status(cli.EXIT_OK, other) == cli.EXIT_INCONCLUSIVE
    wrong = CMVerdict("X18", "CM", "frobenius", {"listed_primes": []}, "no CM")
    assert cli._merge_status(cli.EXIT_OK, wrong) == cli.EXIT_MISMATCH


def test_cache_flag_writes_and_reuses_counts(capsys, tmp_path, monkeypatch):
    path = tmp_path / "c.jsonl"
    code, first = run(capsys, "frobenius", "X10", "--primes", "37,61,157", "--cache", str(path))
    assert code == 0
    assert len(path.read_text().splitlines()) == 6

    def no_counting(*a, **k):
        raise AssertionError("count requested although it is cached")

    monkeypatch.setattr(count, "count_points", no_counting)
    code, second = run(capsys, "frobenius", "X10", "--primes", "37,61,157", "--cache", str(path))
    assert code == 0 and second.out == first.out


def test_figdir_writes_pngs(capsys, tmp_path):
    for argv in (["classify"], ["streit", "X5"], ["quotient", "X12"], ["verdict", "X10,X6"]):
        code, _ = run(capsys, *argv, "--figdir", str(tmp_path))
        assert code == 0
    pngs = sorted(p.name for p in tmp_path.glob("*.png"))
    assert len(pngs) >= 5
    for p in tmp_path.glob("*.png"):
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.skipif(shutil.which("hypercm") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["hypercm", "classify", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count("\n") == 19  # header plus 18 rows
