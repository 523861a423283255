import csv
import io
import json

import numpy as np
import pytest

from bislant.cli import main, parse_basis
from bislant.errors import ParseError
from bislant.report import RunConfig, emit, run


def _run(capsysbinary, argv):
    code = main(argv)
    out = capsysbinary.readouterr()
    return code, out.out, out.err.decode()


def test_verify_ex41_json(capsysbinary):
    code, out, _ = _run(capsysbinary, ["verify", "--target", "ex4_1", "--samples", "5", "--seed", "7"])
    assert code == 0
    data = json.loads(out)
    assert data["classification"]["verdict"] == "pointwise bi-slant"
    assert [s["id"] for s in data["suites"]] == ["fundamental", "slant", "extrinsic", "bislant", "warped",
                                                 "theorems"]
    assert "timing" not in data
    assert data["config"]["seed"] == 7


def test_json_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--target", "ex5_1", "--samples", "6", "--seed", "3", "--suites",
                     "fundamental,slant", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_points(tmp_path):
    outs = []
    for seed in ("1", "2"):
        path = tmp_path / f"{seed}.json"
        main(["verify", "--target", "ex4_1", "--samples", "3", "--seed", seed, "--suites", "fundamental",
              "--out", str(path)])
        outs.append(json.loads(path.read_text()))
    assert outs[0]["suites"][0]["cases"][2]["point"] != outs[1]["suites"][0]["cases"][2]["point"]


def test_csv_has_one_row_per_case(capsysbinary):
    rep = run(RunConfig("ex4_1", suites=("fundamental", "slant"), samples=4))
    n = sum(len(s["cases"]) for s in rep.suites)
    code, out, _ = _run(capsysbinary, ["verify", "--target", "ex4_1", "--samples", "4", "--suites",
                                       "fundamental,slant", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.decode())))
    assert len(rows) == n + 1
    assert rows[0] == ["suite", "identity", "point_index", "point", "residual", "verdict", "roles", "note"]


def test_json_round_trip():
    rep = run(RunConfig("ex4_1", suites=("fundamental",), samples=3))
    data = json.loads(emit(rep, "json"))
    again = json.dumps(data, sort_keys=True, indent=2) + "\n"
    assert again.encode() == emit(rep, "json")
    case = data["suites"][0]["cases"][0]
    assert set(case) == {"identity", "point", "point_index", "residual", "verdict", "roles", "note"}


def test_timing_opt_in():
    rep = run(RunConfig("ex4_1", suites=("fundamental",), samples=2, timing=True))
    assert "timing" in json.loads(emit(rep, "json", timing=True))


def test_text_format(capsysbinary):
    code, out, _ = _run(capsysbinary, ["verify", "--target", "plane_invariant", "--samples", "3", "--format",
                                       "text", "--suites", "fundamental"])
    assert code == 0
    text = out.decode()
    assert "classification: invariant" in text
    assert "[fundamental]" in text


def test_failures_exit_one(capsysbinary):
    code, out, err = _run(capsysbinary, ["verify", "--target", "ex5_1", "--samples", "3", "--suites", "warped"])
    assert code == 1
    assert "failing case" in err
    data = json.loads(out)
    fails = {c["identity"] for s in data["suites"] for c in s["cases"] if c["verdict"] == "fail"}
    assert fails == {"Eq43", "Eq44", "Eq45"}


def test_unknown_target_exit_two(capsysbinary):
    code, _, err = _run(capsysbinary, ["verify", "--target", "nope"])
    assert code == 2
    assert "neither a registry entry" in err


def test_bad_expression_exit_two(tmp_path, capsysbinary):
    spec = {"name": "bad", "k": 2, "m": 3, "p": 1, "q": 1, "domain": [[0, 1], [0, 1]],
            "components": ["u1", "u2", "sin(u1 +"], "J_pattern": ["sigma", "sigma", "sigma_bar"]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec))
    code, _, err = _run(capsysbinary, ["verify", "--target", str(path)])
    assert code == 2
    assert "line 3, column 9" in err


def test_json_target_file(tmp_path, capsysbinary):
    spec = {"name": "helix_plane", "k": 2, "m": 4, "domain": [[0, 1], [0, 1]],
            "components": ["u1", "0", "u2", "0"], "J_pattern": ["sigma", "sigma_bar", "sigma", "sigma_bar"],
            "d1": ["u1"], "d2": ["u2"]}
    path = tmp_path / "plane.json"
    path.write_text(json.dumps(spec))
    code, out, _ = _run(capsysbinary, ["classify", "--target", str(path), "--samples", "4"])
    assert code == 0
    assert json.loads(out)["classification"]["verdict"] == "invariant"


def test_span_defect_exit_two(capsysbinary):
    code, _, err = _run(capsysbinary, ["classify", "--target", "ex4_1", "--d1", "u1", "--d2", "u1"])
    assert code == 2


def test_empty_locus(capsysbinary):
    code, out, _ = _run(capsysbinary, ["classify", "--target", "ex4_2"])
    assert code == 0
    cls = json.loads(out)["classification"]
    assert cls["verdict"] == "none"
    assert cls["locus"]["empty"] is True


def test_hemi_locus_classification(capsysbinary):
    code, out, _ = _run(capsysbinary, ["classify", "--target", "ex4_3", "-p", "2", "--format", "json"])
    assert code == 0
    assert json.loads(out)["classification"]["verdict"] == "pointwise hemi-slant"


def test_list_registry(capsysbinary):
    code, out, _ = _run(capsysbinary, ["list-registry", "--format", "json"])
    assert code == 0
    names = [r["name"] for r in json.loads(out)]
    assert {"ex4_1", "ex4_2", "ex4_3", "ex5_1", "plane_invariant", "plane_antiinvariant"} <= set(names)


def test_parse_basis():
    D = parse_basis("u1,u3", k=3)
    np.testing.assert_array_equal(D.basis, np.eye(3)[:, [0, 2]])
    D = parse_basis("[[1, 1], [1, -1]]")
    assert D.basis.shape == (2, 2)
    with pytest.raises(ParseError):
        parse_basis("x1")


def test_bad_suite_name(capsysbinary):
    code, _, err = _run(capsysbinary, ["verify", "--target", "ex4_1", "--suites", "foo"])
    assert code == 2
    assert "unknown suites" in err
