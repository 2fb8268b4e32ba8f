import json
import subprocess
import sys

import pytest

from thetaunits import cli


def run(*argv):
    """(exit code, stdout) of an in-process CLI call."""
    import contextlib
    import io
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli.main(list(argv))
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text), text


def test_eval_b_10_3():
    code, doc, _ = run_json("eval", "--kind", "b", "--m", "10", "--n", "3", "--prec", "256")
    assert code == 0
    assert doc["value"].startswith("0.17157287525380990239662255158060")
    assert set(doc["residuals"]) == {"theta_vs_mixed", "theta_vs_eta"}


def test_eval_trivial_and_g2():
    assert run_json("eval", "--kind", "b", "--m", "7", "--n", "1")[1]["value"].startswith("1.0000")
    assert run_json("eval", "--kind", "g", "--n", "2", "--prec", "128")[1]["value"].startswith("1.0000")
    assert run_json("eval", "--kind", "a", "--m", "3", "--n", "3")[0] == 0
    assert run_json("eval", "--kind", "G", "--n", "5/3")[0] == 0


@pytest.mark.parametrize("argv,code", [
    (["eval", "--kind", "b", "--m", "-1", "--n", "3"], 2),
    (["eval", "--kind", "b", "--m", "1"], 2),
    (["eval", "--kind", "b", "--m", "1", "--n", "3/2"], 2),
    (["eval", "--kind", "b", "--m", "10", "--n", "3", "--prec", "32"], 2),
    (["derive", "--m", "4", "--n", "3"], 4),
    (["derive", "--m", "31", "--n", "3"], 4),
    (["classdata", "--d", "-7"], 0),
    (["classdata", "--d", "5"], 2),
    (["recognize", "abc"], 2),
    (["recognize", "0.1715728752538099"], 1),
    (["derive-gn", "--m", "23"], 2),
    (["enumerate", "--bound", "4"], 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_derive_report():
    code, doc, _ = run_json("derive", "--m", "23", "--n", "7")
    assert code == 0
    assert doc["case"] == "two-class" and doc["num_selected"] == 2
    assert sorted(r["d1"] for r in doc["characters"] if r["selected"]) == [56, 161]
    assert any("184" in n for n in doc["corpus_notes"])


def test_derive_5_3():
    code, doc, _ = run_json("derive", "--m", "5", "--n", "3")
    assert doc["unit_product"]["text"] == "(1+√2)^-2"
    assert doc["class_data"]["h"] == 4


def test_enumerate():
    code, doc, _ = run_json("enumerate", "--bound", "10000")
    assert doc["counts"] == {"one-class": 7, "two-class": 3}
    assert run_json("enumerate", "--bound", "10")[1]["pairs"] == []


def test_recognize():
    code, doc, _ = run_json("recognize", "0.171572875253809902396622551580603842860656249246103853646")
    assert code == 0 and doc["poly"] == "x^2 - 6x + 1" and doc["is_unit"]


def test_derive_gn():
    code, doc, _ = run_json("derive-gn", "--m", "46", "--prec", "512")
    assert code == 0 and doc["branch"] == "direct"
    assert doc["g_big"].startswith("8.807681447747143")


def test_verify_paper_and_corrupted_corpus(tmp_path):
    code, doc, _ = run_json("verify-paper")
    assert code == 0 and doc["ok"] and doc["failed"] == []
    assert doc["summary"]["b-value"] == {"passed": 10, "total": 10, "typo_flagged": 0}
    src = (tmp_path / "c.jsonl")
    from thetaunits.corpus import default_corpus_path
    lines = default_corpus_path().read_text(encoding="utf-8").splitlines()
    recs = [json.loads(x) for x in lines if x.strip()]
    recs[0]["expr"] = "(add 1 " + recs[0]["expr"] + ")"
    src.write_text("\n".join(json.dumps(r) for r in recs) + "\n", encoding="utf-8")
    code, doc, _ = run_json("verify-paper", "--corpus", str(src))
    assert code == 1 and doc["failed"] == [recs[0]["id"]]


@pytest.mark.parametrize("argv", [
    ["eval", "--kind", "b", "--m", "34", "--n", "7"],
    ["derive", "--m", "17", "--n", "7"],
    ["classdata", "--d", "-952"],
    ["enumerate", "--bound", "3000"],
])
def test_json_round_trip_and_determinism(argv):
    _, doc, text = run_json(*argv)
    assert cli.render_json(doc) == text
    assert run_json(*argv)[2] == text


def test_text_output_is_deterministic():
    a = run("derive", "--m", "13", "--n", "5")[1]
    b = run("derive", "--m", "13", "--n", "5")[1]
    assert a == b and "unit_product:" in a and "  - " in a


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thetaunits", "eval", "--m", "10", "--n", "3", "--json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["command"] == "eval"
    assert "elapsed" in proc.stderr
