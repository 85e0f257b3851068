import json
from pathlib import Path
import subprocess
import sys

import pytest

from holder_lab.cli import main
from holder_lab.cube import parse_pbm
from holder_lab.manifest import ManifestError, parse_manifest

from instances import CANTOR, CROSS, DIAGONAL_2, DUST_4, DUST_8, FULL_SQUARE


def cube_entry(iid, c):
    return {"kind": "fractal_cube", "id": iid, **c.to_json()}


def rational(num, den):
    return {"kind": "rational", "num": num, "den": den}


MANIFEST = {
    "bases": {"lam": {"num": 1, "den": 2}, "mu": None},
    "instances": [
        cube_entry("cantor", CANTOR),
        cube_entry("dust8", DUST_8),
        cube_entry("cross", CROSS),
        cube_entry("full", FULL_SQUARE),
        cube_entry("diag", DIAGONAL_2),
        cube_entry("dust", DUST_4),
        {"kind": "self_similar", "id": "E", "ratios": [rational(1, 4), rational(1, 8)]},
        {"kind": "self_similar", "id": "F", "ratios": [
            {"kind": "power", "base": "lam", "num": 1, "den": 1},
            {"kind": "power", "base": "lam", "num": 5, "den": 1}]},
        {"kind": "self_similar", "id": "halves", "ratios": [rational(1, 2), rational(1, 2)]},
        {"kind": "self_similar", "id": "sq_a", "ratios": [rational(1, 2), rational(1, 3)]},
        {"kind": "self_similar", "id": "sq_b", "ratios": [rational(1, 4), rational(1, 9)]},
        {"kind": "self_similar", "id": "opaque", "ratios": [
            {"kind": "power", "base": "mu", "num": 2, "den": 1},
            {"kind": "power", "base": "mu", "num": 3, "den": 1}]},
    ],
}


@pytest.fixture
def manifest(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(MANIFEST))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_cubes(manifest, capsys):
    code, out, _ = run(capsys, "classify", manifest, "cantor", "dust8", "--mode", "holder")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "StrictlyHolderEquivalent" and doc["theorem"] == "cube-holder"


def test_classify_two_branch_with_bases(manifest, capsys):
    code, out, _ = run(capsys, "classify", manifest, "E", "F")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "StrictlyHolderEquivalent" and doc["theorem"] == "two-branch-holder"
    code, out, _ = run(capsys, "classify", manifest, "E", "F", "--mode", "lipschitz")
    assert json.loads(out)["kind"] == "LipschitzEquivalent"


def test_classify_same_id(manifest, capsys):
    code, out, _ = run(capsys, "classify", manifest, "E", "E", "--mode", "lipschitz")
    assert json.loads(out)["kind"] == "LipschitzEquivalent"


def test_classify_opaque_base(manifest, capsys):
    code, out, _ = run(capsys, "classify", manifest, "opaque", "F", "--mode", "holder")
    assert code == 0 and json.loads(out)["kind"] == "StrictlyHolderEquivalent"


def test_uncertified_cube_needs_assume_td(manifest, capsys):
    code, _, err = run(capsys, "classify", manifest, "cantor", "cross")
    assert code == 2 and "not certified" in err
    code, out, _ = run(capsys, "classify", manifest, "cantor", "cross", "--assume-td")
    assert code == 0 and json.loads(out)["kind"] == "NotEquivalent"


def test_unknown_id(manifest, capsys):
    code, _, err = run(capsys, "classify", manifest, "cantor", "nope")
    assert code == 2 and "nope" in err


def test_check_td(manifest, capsys):
    _, out, _ = run(capsys, "check-td", manifest, "dust")
    assert json.loads(out)["status"] == "certified" and json.loads(out)["depth"] == 1
    _, out, _ = run(capsys, "check-td", manifest, "full")
    assert json.loads(out)["status"] == "full_cube"
    _, out, _ = run(capsys, "check-td", manifest, "diag", "--max-depth", "5")
    doc = json.loads(out)
    assert doc["status"] == "unknown" and doc["growth"] == [2, 4, 8, 16, 32]


def test_verify(manifest, capsys):
    code, out, _ = run(capsys, "verify", manifest, "cantor", "dust8", "--depth", "10")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["pair_count"] == 1024 * 1023 // 2
    code, out, _ = run(capsys, "verify", manifest, "sq_a", "sq_b", "--depth", "10")
    doc = json.loads(out)
    assert code == 0 and doc["observed_extremes"] == {"max": "1", "min": "1"}


def test_verify_without_witness(manifest, capsys):
    code, out, err = run(capsys, "verify", manifest, "cantor", "cross", "--assume-td")
    assert code == 2 and out == "" and "no witness" in err


def test_verify_default_depth_honours_budget(manifest, capsys, monkeypatch):
    monkeypatch.setenv("HOLDER_LAB_MAX_PAIRS", "1000")
    code, out, _ = run(capsys, "verify", manifest, "cantor", "dust8")
    doc = json.loads(out)
    assert code == 0 and doc["depth"] == 5 and doc["pair_count"] <= 1000


def test_render(manifest, capsys, tmp_path):
    out_file = tmp_path / "cross.pbm"
    code, _, _ = run(capsys, "render", manifest, "cross", "--depth", "1", "--out", str(out_file))
    assert code == 0
    golden = (Path(__file__).parent / "golden" / "fig1_cross_depth1.pbm").read_bytes()
    assert out_file.read_bytes() == golden
    _, out, _ = run(capsys, "render", manifest, "cantor", "--depth", "3")
    assert sum(parse_pbm(out)[0]) == 8
    _, out, _ = run(capsys, "render", manifest, "full", "--depth", "2")
    assert out == "P1\n4 4\n1111\n1111\n1111\n1111\n"
    code, _, err = run(capsys, "render", manifest, "dust8")
    assert code == 2


def test_dimension(manifest, capsys):
    _, out, _ = run(capsys, "dimension", manifest, "cross")
    doc = json.loads(out)
    assert doc["exact"] == "log 20 / log 5" and doc["value_12"] == "1.861353116147"
    _, out, _ = run(capsys, "dimension", manifest, "halves")
    assert json.loads(out)["value_12"] == "1.000000000000"
    _, out, _ = run(capsys, "dimension", manifest, "E")
    assert json.loads(out)["value_12"] == "0.405685231376"


def test_help_mentions_separation(capsys):
    with pytest.raises(SystemExit):
        main(["classify", "--help"])
    assert "strong separation" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "holder_lab.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "check-td" in proc.stdout


def test_manifest_round_trip():
    m = parse_manifest(MANIFEST)
    again = parse_manifest(json.loads(json.dumps(m.to_json())))
    assert again.instances == m.instances
    assert again.bases == m.bases


@pytest.mark.parametrize("doc, message", [
    ({"instances": [{"kind": "fractal_cube", "id": "a", "n": 3, "d": 1, "digits": [[0]]}] * 2}, "duplicate"),
    ({"instances": [{"kind": "self_similar", "id": "a", "ratios": [
        {"kind": "power", "base": "zz", "num": 1, "den": 1}, {"kind": "rational", "num": 1, "den": 2}]}]}, "not declared"),
    ({"instances": [{"kind": "self_similar", "id": "a", "ratios": [
        {"kind": "rational", "num": 3, "den": 2}, {"kind": "rational", "num": 1, "den": 2}]}]}, "a"),
    ({"instances": [{"kind": "fractal_cube", "id": "a", "n": 3, "d": 2, "digits": [[0, 0], [3, 1]]}]}, "range"),
    ({"bases": {"b": {"num": 2, "den": 1}}, "instances": []}, "between"),
    ({"instances": [{"kind": "blob", "id": "a"}]}, "unknown kind"),
])
def test_manifest_errors(doc, message):
    with pytest.raises(ManifestError, match=message):
        parse_manifest(doc)
