import csv
import io
import json
import math
import shutil
import subprocess

import pytest

from chaosbound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_order(capsys):
    assert run(capsys, "order", "--class", "C", "0(1)", "0(0)")[1].strip() == "Less"


def test_compat(capsys):
    assert run(capsys, "compat", "--class", "A", "001(0)", "1(0)")[1].strip() == "false"


def test_cascade(capsys):
    code, out, _ = run(capsys, "cascade", "--class", "C", "--n", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "1 3 5 11 21"
    assert lines[1] == "00100"


def test_words(capsys):
    out = run(capsys, "words", "--pq", "2/5")[1].splitlines()
    assert out[:3] == ["omega=(00101)", "r-=01010", "r+=10010"]


def test_entropy(capsys):
    out = run(capsys, "entropy", "--class", "A", "--a", "1/2", "--b", "1/2", "--format", "json")[1]
    rec = json.loads(out)
    assert rec["positive"] and abs(rec["entropy_estimate"] - math.log(2)) < 1e-12
    assert run(capsys, "entropy", "--class", "A", "--a", "0", "--b", "3/4")[1].startswith("zero")


def test_dimension(capsys):
    rec = json.loads(run(capsys, "dimension", "--a", "1/4", "--b", "3/4", "--n", "6", "--format", "json")[1])
    assert rec["markov_exact_estimate"] == 0 and rec["cylinder_count"] == 2


def test_boxes(capsys):
    doc = json.loads(run(capsys, "boxes", "--class", "C", "--depth", "1")[1])
    assert doc["counts"] == {"1": 4}
    corners = {(b["a_lo"], b["a_hi"], b["b_lo"], b["b_hi"]) for b in doc["boxes"]}
    assert ("1/3", "11/24", "7/12", "5/6") in corners
    doc = json.loads(run(capsys, "boxes", "--class", "B", "--depth", "1", "--nmax", "5")[1])
    assert doc["counts"] == {"1": 8}


def test_boxes_deterministic(capsys):
    first = run(capsys, "boxes", "--class", "B", "--depth", "2", "--nmax", "2")[1]
    assert run(capsys, "boxes", "--class", "B", "--depth", "2", "--nmax", "2")[1] == first


def test_boxes_svg(tmp_path, capsys):
    out = tmp_path / "c.svg"
    assert main(["boxes", "--class", "C", "--depth", "2", "--format", "svg", "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.count("<rect") == 1 + 4 + 34
    assert json.loads(out.with_suffix(".json").read_text())["counts"]["2"] == 34


def test_trace_csv(capsys):
    code, out, _ = run(capsys, "trace", "--class", "A", "--cmin", "4/5", "--cmax", "6/5",
                       "--steps", "41", "--tol", "1/4096")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 41 and rows[0]["c"] == "4/5"


def test_classify(capsys):
    rec = json.loads(run(capsys, "classify", "--a", "17/48", "--b", "7/12")[1])
    assert rec["class"] == "HeteroclinicSegment" and rec["pq"] == "1/2"


def test_anharmonic(capsys):
    rec = json.loads(run(capsys, "anharmonic", "--class", "C", "--b", "2/3")[1])
    assert rec["overlap"] is True
    code, _, err = run(capsys, "anharmonic", "--class", "C", "--b", "1/2")
    assert code == 2 and "b-range" in err


def test_exit_codes(capsys):
    assert run(capsys, "entropy", "--a", "3/4", "--b", "1/2")[0] == 2
    assert run(capsys, "entropy", "--a", "x", "--b", "1/2")[0] == 2
    assert run(capsys, "order", "--class", "E", "0", "1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "classify", "--a", "1/2", "--b", "1/2")[0] == 2


def test_truncation_exit_code(capsys):
    from fractions import Fraction as F

    from chaosbound.boundary import heteroclinic_segment

    seg = heteroclinic_segment([], F(1, 7), 1)
    a, b = seg.point((seg.lo + seg.hi) / 2)
    assert run(capsys, "classify", "--a", str(a), "--b", str(b))[0] == 3


def test_out_file(tmp_path, capsys):
    p = tmp_path / "w.txt"
    assert main(["words", "--pq", "1/3", "--out", str(p)]) == 0
    assert p.read_text().startswith("omega=(001)")


@pytest.mark.skipif(shutil.which("chaosbound") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["chaosbound", "cascade", "--n", "3"], capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0] == "1 3 5 11"


def test_oracle_exit_code(monkeypatch, capsys):
    from chaosbound import renorm

    def broken(*args, **kwargs):
        raise renorm.OracleFailure("forced")

    monkeypatch.setattr(renorm, "box_tree", broken)
    assert run(capsys, "boxes", "--class", "C")[0] == 4
