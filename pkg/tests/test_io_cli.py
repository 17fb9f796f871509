import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from powerroots.cli import main
from powerroots.corpus import corpus_specs
from powerroots.errors import ValidationError
from powerroots.exactalg import GF, Matrix
from powerroots.io import (dumps, load_spec, parse_element, parse_spec, render_spec, spec_digest,
                           spec_from_dict, spec_to_dict)
from powerroots.verify import verify_certificate

F5 = GF(5)


# -- spec files -----------------------------------------------------------


def test_spec_roundtrip_corpus():
    for spec in corpus_specs():
        again = parse_spec(render_spec(spec))
        assert spec_to_dict(again) == spec_to_dict(spec)
        assert spec_digest(again) == spec_digest(spec)


def test_spec_roundtrip_q(specs_dir):
    spec = load_spec(str(specs_dir / "heis_q_diag.json"))
    assert parse_spec(render_spec(spec)) == spec
    assert spec.generators[0].diagonal() == (Fraction(2), Fraction(1), Fraction(1, 3))


def test_loaded_g5_matches_corpus(g5, g5_from_file):
    assert g5_from_file.elements == g5.elements and g5_from_file.names == ("g1", "g2", "g3")


@pytest.mark.parametrize("doc, where", [
    ({"dim": 2, "generators": []}, "field"),
    ({"field": {"Fp": 6}, "dim": 2, "generators": []}, "field"),
    ({"field": {"Fp": 5}, "dim": 0, "generators": []}, "dim"),
    ({"field": {"Fp": 5}, "dim": 2, "generators": [[[1, 0]]]}, "generators[0]"),
    ({"field": {"Fp": 5}, "dim": 2, "generators": [[[1, "x"], [0, 1]]]}, "generators[0][0][1]"),
    ({"field": "Q", "dim": 2, "generators": [], "lie_algebra": "no"}, "lie_algebra"),
    ({"field": {"Fp": 5}, "dim": 2, "generators": [], "colour": 1}, "colour"),
    ({"field": {"Fp": 5}, "dim": 2, "generators": [], "n_coords": [[1]]}, "n_coords"),
])
def test_spec_diagnostics(doc, where):
    with pytest.raises(ValidationError) as exc:
        spec_from_dict(doc)
    assert exc.value.where == where


def test_spec_bad_json_reports_position():
    with pytest.raises(ValidationError, match=r"<spec>:1:\d+"):
        parse_spec("{\"dim\": }")


def test_dumps_is_canonical():
    doc = {"b": [1, 2], "a": {"z": "1/2", "y": [[1, 0], [0, 1]]}}
    text = dumps(doc)
    assert text == dumps(json.loads(text)) and text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


# -- element expressions --------------------------------------------------


def test_parse_element_words(g5):
    g1 = g5.generators[0]
    assert parse_element(g5, "g1^2") == g1 ** 2
    assert parse_element(g5, "g1^-1 * g1") == g5.identity
    assert parse_element(g5, "e") == parse_element(g5, "I") == g5.identity
    # n_coords puts s at (1,3) and t at (2,3)
    assert parse_element(g5, "g1^2*n(1,0)") == g1 ** 2 @ Matrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]], F5)


def test_parse_element_literal(g5, heis_q):
    assert parse_element(g5, "[[4,0,1],[0,2,0],[0,0,1]]")[0, 2] == 1
    y = parse_element(heis_q, "[[1,1/2,3/8],[0,1,1/2],[0,0,1]]")
    assert y[0, 2] == Fraction(3, 8)


@pytest.mark.parametrize("text", ["", "g9", "g1^", "n(1)", "[[1,0],[0,1]]", "g1**2", "[[2,0,0],[0,1,0],[0,0,1]]"])
def test_parse_element_errors(g5, text):
    with pytest.raises(ValidationError):
        parse_element(g5, text)


@given(st.lists(st.tuples(st.sampled_from(["g1", "g2", "g3"]), st.integers(-5, 5)), min_size=1, max_size=6))
def test_parse_element_matches_word(g5_from_file, word):
    ctx = g5_from_file
    text = "*".join(f"{n}^{e}" for n, e in word)
    expect = ctx.identity
    for n, e in word:
        expect = expect @ ctx.generators[ctx.names.index(n)] ** e
    assert parse_element(ctx, text) == expect


# -- command line ---------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_analyze_negative(capsys, g5_file):
    code, out, err = run(capsys, "analyze", g5_file, "--element", "g1^2", "--k", "2")
    assert code == 1
    doc = json.loads(out)
    assert doc["decision"] is False and doc["kind"] == "coset-decision"
    assert "layer 2" in err


def test_cli_analyze_positive_and_verify(capsys, g5_file, tmp_path):
    path = tmp_path / "c.json"
    code, out, err = run(capsys, "analyze", g5_file, "--element", "g1^3", "--k", "3", "--out", str(path),
                         "--verify")
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["decision"] is True and doc["witness"] == ["4", "2", "1"]
    code, out, _ = run(capsys, "verify", str(path), g5_file)
    assert code == 0 and out.strip().endswith("verified")


def test_cli_verify_rejects_tampering(capsys, g5_file, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "analyze", g5_file, "--element", "g1^3", "--k", "3", "--out", str(path))
    doc = json.loads(path.read_text())
    doc["roots"][0]["y"][0][2] = str((int(doc["roots"][0]["y"][0][2]) + 1) % 5)
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path), g5_file)
    assert code == 1 and "REJECTED" in out
    doc["decision"] = True
    doc["witness"] = ["1", "1", "1"]
    path.write_text(json.dumps(doc))
    assert run(capsys, "verify", str(path), g5_file)[0] == 1


def test_cli_verify_rejects_flipped_negative(capsys, g5_file, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "analyze", g5_file, "--element", "g1^3", "--k", "3", "--out", str(path))
    doc = json.loads(path.read_text())
    doc["decision"] = False
    path.write_text(json.dumps(doc))
    assert run(capsys, "verify", str(path), g5_file)[0] == 1


def test_cli_root_q(capsys, specs_dir):
    code, out, err = run(capsys, "root", str(specs_dir / "heis_q.json"), "--element", "n(1,1,1)", "--k", "2",
                         "--verify")
    assert code == 0
    assert json.loads(out)["roots"][0]["y"] == [["1", "1/2", "3/8"], ["0", "1", "1/2"], ["0", "0", "1"]]


def test_cli_not_coprime(capsys, g5_file):
    code, out, err = run(capsys, "analyze", g5_file, "--element", "g1", "--k", "5")
    assert code == 2 and out == "" and "not coprime" in err


def test_cli_bad_inputs(capsys, g5_file, tmp_path):
    assert run(capsys, "analyze", g5_file, "--element", "g7", "--k", "2")[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.json"), "--element", "g1", "--k", "2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"Fp": 5}, "dim": 2, "generators": [[[1, 0], [1, 1]]]}')
    code, _, err = run(capsys, "analyze", str(bad), "--element", "e", "--k", "2")
    assert code == 2 and "generators[0]" in err
    with pytest.raises(SystemExit) as exc:
        main(["analyze", g5_file, "--k", "2"])
    assert exc.value.code == 2


def test_cli_oracle_table(capsys, g5_file):
    code, out, err = run(capsys, "oracle", g5_file, "--kmax", "3")
    assert code == 0 and "12 comparisons, 0 mismatches" in err
    code, out, _ = run(capsys, "oracle", g5_file, "--kmax", "2", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 9 and all(len(r) == 6 for r in rows)
    assert rows[5] == ["(1,1,1)", "2", "true", "true", "ok", "30"]


def test_cli_oracle_rejects_q(capsys, specs_dir):
    assert run(capsys, "oracle", str(specs_dir / "heis_q.json"), "--kmax", "2")[0] == 2


def test_cli_regular(capsys, g5_file):
    code, out, err = run(capsys, "regular", g5_file, "--element", "g1", "--k", "2", "--verify")
    assert code == 1 and json.loads(out)["regular"] is False
    assert run(capsys, "regular", g5_file, "--element", "g1", "--k", "3")[0] == 0


def test_cli_element_level(capsys, g5_file):
    assert run(capsys, "analyze", g5_file, "--element", "g1^2", "--k", "2", "--element-level", "--verify")[0] == 0
    assert run(capsys, "analyze", g5_file, "--element", "g1^2*n(1,0)", "--k", "2", "--element-level",
               "--verify")[0] == 1


def test_cli_refined_series(capsys, specs_dir):
    code, out, _ = run(capsys, "analyze", str(specs_dir / "heis_q_diag.json"), "--element", "g1^2", "--k", "2",
                       "--series", "refined", "--verify")
    assert code == 0 and len(json.loads(out)["layers"]) == 3


def test_cli_output_is_byte_identical(g5_file):
    cmd = [sys.executable, "-m", "powerroots.cli", "analyze", g5_file, "--element", "g1^3*n(1,2)", "--k", "3"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


def test_verify_result_lists_checks(g5_from_file, capsys, g5_file):
    _, out, _ = run(capsys, "analyze", g5_file, "--element", "g1^2", "--k", "2")
    res = verify_certificate(json.loads(out), g5_from_file.spec)
    assert res.ok and res.checks
