from __future__ import annotations

import json
import re
import subprocess
import sys

import pytest

from abring import InvalidCategory, NoFactorizationSystem, gen_epi
from abring.cli import (EXIT_INVALID, EXIT_IO, EXIT_NO_FS, EXIT_OK, CatFileError,
                        dump_catfile, golden_checks, main, parse_catfile)
from abring.burnside import hom_matrix

EPI2_BY_HAND = {
    "name": "two sets",
    "objects": ["one", "two"],
    "morphisms": [{"name": "swap", "src": "two", "dst": "two"},
                  {"name": "crush", "src": "two", "dst": "one"}],
    "compose": {"swap|swap": "id:two", "crush|swap": "crush"},
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="cat.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_hand_written_epi2_parses():
    cat, fs = parse_catfile(json.dumps(EPI2_BY_HAND))
    assert fs is None
    assert len(cat) == 4
    assert hom_matrix(cat, ["one", "two"]) == hom_matrix(gen_epi(2))


def test_missing_composite_names_the_pair():
    doc = dict(EPI2_BY_HAND, compose={"swap|swap": "id:two"})
    with pytest.raises(InvalidCategory) as exc:
        parse_catfile(json.dumps(doc))
    assert "crush|swap" in "\n".join(str(f) for f in exc.value.report.findings)


def test_catfile_errors_carry_paths():
    cases = [
        ("{", "line 1"),
        ("[]", "$"),
        (json.dumps({**EPI2_BY_HAND, "extra": 1}), "$.extra"),
        (json.dumps({k: v for k, v in EPI2_BY_HAND.items() if k != "compose"}), "$.compose"),
        (json.dumps({**EPI2_BY_HAND, "objects": ["one", 2]}), "$.objects[1]"),
        (json.dumps({**EPI2_BY_HAND, "morphisms": [{"name": "id:x", "src": "one",
                                                     "dst": "one"}]}), "$.morphisms[0].name"),
        (json.dumps({**EPI2_BY_HAND, "compose": {"swap": "swap"}}), "$.compose"),
        (json.dumps({**EPI2_BY_HAND, "epis": []}), "together"),
    ]
    for text, where in cases:
        with pytest.raises(CatFileError) as exc:
            parse_catfile(text)
        assert where in str(exc.value), (text, str(exc.value))


def test_explicit_classes_are_checked():
    good = {**EPI2_BY_HAND, "epis": ["id:one", "id:two", "swap", "crush"],
            "monos": ["id:one", "id:two", "swap"]}
    _, fs = parse_catfile(json.dumps(good))
    assert fs is not None and "crush" in fs.epi_class
    bad = {**good, "monos": ["id:one", "id:two", "swap", "crush"]}
    with pytest.raises(NoFactorizationSystem):
        parse_catfile(json.dumps(bad))


def test_dump_round_trip_is_stable(epi_cats, orbit_cats):
    for cat in (epi_cats[3], epi_cats[4], orbit_cats["C6"], orbit_cats["S3"]):
        text = dump_catfile(cat)
        assert dump_catfile(parse_catfile(text)[0]) == text
        doc = json.loads(text)
        assert not any(k.startswith("id:") or "|id:" in k for k in doc["compose"])


def test_gen_and_analyze(capsys, tmp_path):
    out_file = tmp_path / "e4.json"
    code, _, _ = run(capsys, "gen", "epi", "--d", "4", "-o", str(out_file))
    assert code == EXIT_OK
    code, out, _ = run(capsys, "analyze", str(out_file), "--idempotents")
    assert code == EXIT_OK
    assert "e_[2] = 1/2*[2] - 1/2*[3] + 11/24*[4]" in out
    assert "e_[3] = 1/6*[3] - 1/4*[4]" in out
    assert "unit: [1]" in out


def test_analyze_json_has_no_floats(capsys, tmp_path):
    path = tmp_path / "c6.json"
    assert run(capsys, "gen", "orbit", "--cyclic", "6", "-o", str(path))[0] == EXIT_OK
    code, out, _ = run(capsys, "analyze", str(path), "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert list(rep)[:6] == ["category", "validation", "objects", "hom_matrix",
                             "hom_matrix_inverse", "unit"]
    assert rep["unit"] == {"C6/C6": "1"}
    assert rep["det"] == {"det_H": "36", "product_of_aut_orders": "36", "equal": True}
    assert rep["eam"]["H_equals_EAM"] is True

    def strings(x):
        if isinstance(x, dict):
            return all(strings(v) for v in x.values())
        if isinstance(x, list):
            return all(strings(v) for v in x)
        return isinstance(x, (str, bool)) or x is None
    assert strings(rep)
    assert not re.search(r"\d\.\d", out)


def test_analyze_is_deterministic(capsys, tmp_path):
    path = write(tmp_path, dump_catfile(gen_epi(4)))
    first = run(capsys, "analyze", path, "--json")[1]
    assert run(capsys, "analyze", path, "--json")[1] == first


def test_gen_orbit_from_cayley(capsys, tmp_path):
    from importlib.resources import files
    cay = files("abring.data").joinpath("s3.json").read_text()
    path = write(tmp_path, cay, "s3.json")
    code, out, _ = run(capsys, "gen", "orbit", "--cayley", path)
    assert code == EXIT_OK
    assert json.loads(out)["name"] == "Orb(S3)"


def test_bad_cayley_exits_1(capsys, tmp_path):
    from test_catgen import LOOP5
    path = write(tmp_path, {"elements": list("abcde"), "table": LOOP5})
    code, _, err = run(capsys, "gen", "orbit", "--cayley", path, "--name", "L")
    assert code == EXIT_INVALID and "non-associative" in err


def test_invalid_category_exits_1(capsys, tmp_path):
    path = write(tmp_path, dict(EPI2_BY_HAND, compose={"swap|swap": "id:two"}))
    code, _, err = run(capsys, "analyze", path)
    assert code == EXIT_INVALID
    assert "composition-gap" in err


def test_no_factorization_system_exits_2(capsys, tmp_path):
    doc = {"name": "idem", "objects": ["*"], "morphisms": [{"name": "u", "src": "*", "dst": "*"}],
           "compose": {"u|u": "u"}}
    code, _, err = run(capsys, "analyze", write(tmp_path, doc))
    assert code == EXIT_NO_FS
    assert "no-factorization" in err or "not-" in err


def test_io_errors_exit_3(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == EXIT_IO
    assert run(capsys, "analyze", write(tmp_path, "not json"))[0] == EXIT_IO
    assert run(capsys, "gen", "epi", "--d", "9")[0] == EXIT_IO
    assert run(capsys, "frobnicate")[0] == EXIT_IO


def test_restrict(capsys, tmp_path):
    path = write(tmp_path, dump_catfile(gen_epi(4)))
    code, out, _ = run(capsys, "restrict", path, "--objects", "[1],[2],[3]", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["hypothesis"] == "holds" and rep["kernel_kind"] == "structural"
    assert rep["kernel_basis"] == [{"[4]": "1"}]
    code, out, _ = run(capsys, "restrict", path, "--objects", "[1],[7]")
    assert code == EXIT_IO


def test_restrict_generic(capsys, tmp_path, orbit_cats):
    path = write(tmp_path, dump_catfile(orbit_cats["C6"]))
    code, out, _ = run(capsys, "restrict", path, "--objects", "C6/C1")
    assert code == EXIT_OK
    assert "fails" in out and "C6/C1->C6/C6@0" in out and "kernel (generic)" in out


def test_stirling(capsys):
    code, out, _ = run(capsys, "stirling", "--d", "4", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["inverse_last_row"] == ["-1/4", "11/24", "-1/4", "1/24"]
    assert rep["hom_matrix"][3] == ["1", "14", "36", "24"]


def test_reference_table_check(capsys):
    assert all(ok for _, ok, _ in golden_checks())
    code, out, _ = run(capsys, "verify-paper")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert re.search(r"(\d+)/\1 checks passed", out)


def test_pipeline_through_subprocesses():
    gen = subprocess.run([sys.executable, "-m", "abring", "gen", "epi", "--d", "4"],
                         capture_output=True, text=True, check=True)
    ana = subprocess.run([sys.executable, "-m", "abring", "analyze", "--idempotents"],
                         input=gen.stdout, capture_output=True, text=True)
    assert ana.returncode == 0, ana.stderr
    assert "e_[2] = 1/2*[2] - 1/2*[3] + 11/24*[4]" in ana.stdout
