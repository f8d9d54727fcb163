import copy
import json

import pytest

from hodgetate import checks, cli
from hodgetate.recheck import recheck


@pytest.fixture(scope="module")
def reports():
    return {
        "lemma-n": checks.check_lemma_n(6).to_dict(),
        "h2-limit": checks.check_h2_limit(6, samples=6).to_dict(),
        "odd-index": checks.check_odd_index(3, "B", 2).to_dict(),
        "even-index": checks.check_even_index(2, "D", 2).to_dict(),
        "spinor-lemmas": checks.check_spinor_lemmas(3, "D", 3).to_dict(),
        "ks-limit": checks.check_ks_limit(5, samples=4).to_dict(),
    }


@pytest.mark.parametrize("name", sorted(checks.CHECKS))
def test_check_passes_and_rechecks(reports, name):
    r = reports[name]
    assert r["verdict"] == "pass", r["witness"].get("failed")
    assert r["witness"]["assertions"] > 0
    assert recheck(r) == []


def test_recheck_catches_tampering(reports):
    r = copy.deepcopy(reports["lemma-n"])
    r["witness"]["N"][0][2] = "2"
    assert recheck(r)
    r = copy.deepcopy(reports["odd-index"])
    r["witness"]["index"] = 5
    assert recheck(r)
    r = copy.deepcopy(reports["h2-limit"])
    sample = next(s for s in r["witness"]["samples"] if s["accepted"])
    sample["coefficients"][2] = "-1"
    assert recheck(r)


def test_skips_are_not_failures():
    r = checks.check_lemma_n(4)
    assert r.verdict == "skipped" and r.witness["reason"] == "precondition"
    assert recheck(r.to_dict()) == []
    r = checks.check_ks_limit(14, samples=1)
    assert r.verdict == "skipped" and r.witness["reason"] == "cap"


def test_full_report_small_grid():
    cfg = {"dims": [4, 5], "ks_dims": [5], "l": [2], "k": [1], "n": [2], "types": ["B"],
           "samples": 3, "ks_samples": 2}
    doc = checks.full_report(cfg, timing=False)
    assert doc["summary"] == {"pass": 6, "fail": 0, "skipped": 2}
    assert doc["preamble"]["out_of_scope"]
    names = [r["check"] for r in doc["reports"]]
    assert names == sorted(names)
    assert len(names) == 8
    assert all(r["elapsed_ms"] == 0 for r in doc["reports"])
    with pytest.raises(ValueError, match="unknown config keys"):
        checks.full_report({"dimz": [5]})


# --------------------------------------------------------------------------
# command line


def test_cli_single_check(capsys):
    assert cli.main(["lemma-n", "--dim", "6"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["check"] == "lemma-n" and doc["verdict"] == "pass"


def test_cli_skipped_exit_zero(capsys):
    assert cli.main(["lemma-n", "--dim", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "skipped"


def test_cli_failure_exit_one(monkeypatch, capsys):
    monkeypatch.setitem(checks.CHECKS, "lemma-n",
                        lambda *a, **k: checks.CheckReport("lemma-n", {}, checks.FAIL, {"failed": ["x"]}))
    assert cli.main(["lemma-n"]) == 1
    assert json.loads(capsys.readouterr().out)["verdict"] == "fail"


def test_cli_malformed_gram(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0\n0 x\n")
    assert cli.main(["lemma-n", "--gram", str(bad)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("hodgetate: error:") and "bad.txt:2:" in err


def test_cli_missing_file_and_bad_usage(capsys):
    assert cli.main(["lemma-n", "--gram", "/nonexistent/g.txt"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-check"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_gram_file(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps([[0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
                             [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 2, 0], [0, 0, 0, 0, 0, -1]]))
    assert cli.main(["h2-limit", "--gram", str(g), "--samples", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["params"]["dim"] == 6 and doc["verdict"] == "pass"
    assert recheck(doc) == []


def test_cli_deterministic_output(tmp_path):
    argv = ["h2-limit", "--dim", "6", "--samples", "5", "--seed", "3", "--no-timing"]
    a, b = cli.run(argv), cli.run(argv)
    assert a[1] == b[1]
    out = tmp_path / "r.json"
    assert cli.main(argv + ["--out", str(out)]) == 0
    assert out.read_text() == a[1]


def test_cli_alias_and_markdown():
    code, text, _ = cli.run(["nilp-orbit", "--dim", "5", "--samples", "3", "--no-timing"])
    assert code == 0 and json.loads(text)["check"] == "h2-limit"
    code, text, _ = cli.run(["odd-index", "--l", "2", "--type", "D", "--k", "2", "--format", "markdown"])
    assert code == 0 and "| odd-index |" in text and "pass" in text


def test_cli_all_with_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dims": [4], "ks_dims": [], "l": [2], "k": [1], "n": [2], "types": ["B"]}))
    assert cli.main(["all", "--config", str(cfg), "--no-timing", "--format", "markdown"]) == 0
    text = capsys.readouterr().out
    assert "skipped" in text
    cfg.write_text(json.dumps({"colour": 1}))
    assert cli.main(["all", "--config", str(cfg)]) == 2
    cfg.write_text("[1, 2")
    assert cli.main(["all", "--config", str(cfg)]) == 2
    capsys.readouterr()
