from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from conftest import CORPUS
from rp3kh.cli import main
from rp3kh.rules import builtin, format_rule_file


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", str(CORPUS / "one_crossing.rpd"))
    assert code == 0
    assert out.splitlines() == ["class 0", "n_crossings 1", "components 2"]


def test_kh_json_and_text_agree(capsys):
    path = str(CORPUS / "trefoil.rpd")
    code, text, _ = run(capsys, "kh", path)
    code_j, js, _ = run(capsys, "kh", path, "--json")
    assert code == code_j == 0
    doc = json.loads(js)
    assert doc["profile"] == {"total": 6, "ranks": {"0": 2, "2": 2, "3": 2}}
    assert text.splitlines()[0] == "kh total 6"


def test_kh_reduced_and_variants(capsys):
    code, out, _ = run(capsys, "kh", str(CORPUS / "uprime.rpd"), "--reduced", "--json")
    assert code == 0 and json.loads(out)["profile"]["total"] == 1
    code, out, _ = run(capsys, "kh", str(CORPUS / "proj_trefoil.rpd"), "--variant", "kh1", "--json")
    assert json.loads(out)["profile"]["total"] == 6
    code, _, err = run(capsys, "kh", str(CORPUS / "trefoil.rpd"), "--variant", "kh1")
    assert code == 2 and "class-1" in err


def test_kh_per_position(capsys):
    code, out, _ = run(capsys, "kh", str(CORPUS / "trefoil.rpd"), "--per-position", "--json")
    doc = json.loads(out)
    assert code == 0
    assert {p["total"] for p in doc["positions"].values()} == {3}


def test_instanton_and_dump(capsys, tmp_path):
    dump = tmp_path / "e1.json"
    code, out, _ = run(capsys, "instanton", str(CORPUS / "uprime_kink.rpd"), "--e2", "--json",
                       "--dump-complex", str(dump))
    doc = json.loads(out)
    assert code == 0
    assert doc["e2"]["total"] == 4
    assert json.loads(dump.read_text())["direction"] == "reversed"


def test_cube_census_and_vertex(capsys):
    code, out, _ = run(capsys, "cube", str(CORPUS / "one_crossing.rpd"), "--json")
    assert code == 0 and json.loads(out)["census"]["onetoone"] == 1
    code, out, _ = run(capsys, "cube", str(CORPUS / "uprime_kink.rpd"), "--vertex", "0")
    assert code == 0 and "essential" in out
    code, _, err = run(capsys, "cube", str(CORPUS / "uprime_kink.rpd"), "--vertex", "01")
    assert code == 2


def test_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", str(CORPUS / "proj_121.rpd"))
    assert code == 0 and "FAIL" not in out
    bad = tmp_path / "bad.rpd"
    bad.write_text("X 1 1 2 2\nW 1 1\nW 2 1\n")
    code, out, _ = run(capsys, "verify", str(bad), "--json")
    assert code == 1
    assert json.loads(out)["checks"][0]["name"] == "essential-count"


@pytest.mark.parametrize("text", ["X 1 2 3\n", "X 1 2 3 4\n", "garbage\n"])
def test_malformed_input_exits_2(capsys, tmp_path, text):
    path = tmp_path / "bad.rpd"
    path.write_text(text)
    code, _, err = run(capsys, "kh", str(path))
    assert code == 2 and err.startswith("error:")


def test_missing_file_and_bad_flags(capsys):
    assert run(capsys, "kh", "/nonexistent/x.rpd")[0] == 2
    assert run(capsys, "kh")[0] == 2
    assert run(capsys, "verify", str(CORPUS / "trefoil.rpd"), "--threads", "0")[0] == 2


def test_output_is_byte_stable(capsys):
    path = str(CORPUS / "proj_1212.rpd")
    first = run(capsys, "verify", path, "--json")[1]
    second = run(capsys, "verify", path, "--json", "--threads", "2")[1]
    assert first == second


def _mini_corpus(tmp_path, names, expect):
    for n in names:
        shutil.copy(CORPUS / f"{n}.rpd", tmp_path / f"{n}.rpd")
    manifest = {"entries": {n: {"expect": expect.get(n, {}), "observe": []} for n in names}, "pairs": []}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    return tmp_path


def test_corpus_negative_control(capsys, tmp_path):
    root = _mini_corpus(tmp_path, ["uprime"], {"uprime": {"khr.total": {"value": 2, "provenance": "PAPER"}}})
    code, out, _ = run(capsys, "corpus", str(root))
    assert code == 1
    exp = json.loads(out)["entries"][0]["expectations"][0]
    assert (exp["expected"], exp["actual"], exp["pass"]) == (2, 1, False)


def test_corpus_positive_and_csv(capsys, tmp_path):
    root = _mini_corpus(tmp_path, ["uprime", "trefoil"], {"uprime": {"khr.total": {"value": 1, "provenance": "PAPER"}}})
    code, out, _ = run(capsys, "corpus", str(root), "--format", "csv")
    assert code == 0
    assert out.splitlines()[0].startswith("name,class,n_crossings")
    assert len(out.splitlines()) == 3


def test_corpus_requires_provenance(capsys, tmp_path):
    root = _mini_corpus(tmp_path, ["uprime"], {"uprime": {"khr.total": {"value": 1}}})
    assert run(capsys, "corpus", str(root))[0] == 2


def test_empty_corpus_directory(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", str(tmp_path))
    assert code == 0
    assert json.loads(out) == {"entries": [], "pairs": [], "pass": True}


def test_rules_check(capsys, tmp_path):
    good = tmp_path / "kh1.rules"
    good.write_text(format_rule_file(builtin("KH1-CLASS1")))
    code, out, _ = run(capsys, "rules", "check", str(good))
    assert code == 0 and out.splitlines()[-1] == "pass"
    bad = tmp_path / "bad.rules"
    bad.write_text(format_rule_file(builtin("KH0")).replace("1*1 -> 1", "1*1 -> X"))
    code, out, _ = run(capsys, "rules", "check", str(bad), "--json")
    assert code == 1 and json.loads(out)["pass"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rp3kh", "classify", str(CORPUS / "uprime.rpd")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "class 1"
