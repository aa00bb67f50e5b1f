import json
import subprocess
import sys

import pytest

from padic_periods import cli
from padic_periods.hyperg import FamilyTag
from padic_periods.report import CongruenceReport


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_defaults():
    cfg = cli.SuiteConfig()
    assert cfg.primes == (3, 5, 7) and cfg.s_max == 2
    assert cfg.to_json()["families"] == [f.name for f in FamilyTag]
    assert "jobs" not in cfg.to_json()


def test_bad_config_values():
    for kw in ({"primes": (4,)}, {"primes": (2,)}, {"primes": ()}, {"s_max": 0}, {"jobs": 0}):
        with pytest.raises(cli.ConfigError):
            cli.SuiteConfig(**kw)


def test_passing_suite_report_shape(tmp_path):
    code, rep = run(["fifths", "--primes", "7", "--s-max", "1"], tmp_path)
    assert code == 0
    assert rep["suite"] == "fifths"
    assert rep["config"]["primes"] == [7]
    s = rep["summary"]
    assert s["failed"] == 0 and s["total"] == s["passed"] == len(rep["checks"]) > 0
    for c in rep["checks"]:
        assert {"id", "description", "paper_ref", "modulus", "pass"} <= set(c)


def test_failing_suite_exit_code_and_witness(tmp_path):
    code, rep = run(["kz", "--primes", "3", "--s-max", "1"], tmp_path)
    assert code == 1
    bad = [c for c in rep["checks"] if not c["pass"]]
    assert [c["id"] for c in bad] == ["kz-line-equality-3"]
    assert bad[0]["witness"] == {"monomial": "z2^0", "residue": 3}
    assert rep["summary"]["failed"] == 1


def test_empty_suite(tmp_path):
    # thirds skips p = 3, so nothing is checked
    code, rep = run(["thirds", "--primes", "3"], tmp_path)
    assert code == 0
    assert rep["checks"] == [] and rep["summary"] == {"total": 0, "passed": 0, "failed": 0}


def test_usage_errors(tmp_path, capsys):
    assert cli.main(["nonsense"]) == 2
    assert cli.main(["ghost", "--primes", "9"]) == 2
    assert cli.main(["ghost", "--primes", "x,y"]) == 2
    assert cli.main(["ghost", "--families", "quarter"]) == 2
    assert cli.main(["ghost", "--bogus-flag"]) == 2
    assert cli.main(["describe", "nonsense"]) == 2
    assert cli.main(["ghost", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"colour": 1}')
    assert cli.main(["ghost", "--config", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_deterministic_bytes(tmp_path):
    args = ["dwork-tuple", "--primes", "3", "--samples", "10", "--seed", "4"]
    cli.main([*args, "--out", str(tmp_path / "a.json")])
    cli.main([*args, "--out", str(tmp_path / "b.json"), "--jobs", "2"])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    cli.main(["dwork-tuple", "--primes", "3", "--samples", "10", "--seed", "5", "--out", str(tmp_path / "c.json")])
    assert (tmp_path / "a.json").read_bytes() != (tmp_path / "c.json").read_bytes()


def test_parallel_matches_serial_across_primes(tmp_path):
    args = ["hyperg", "--primes", "3,5", "--s-max", "1"]
    cli.main([*args, "--out", str(tmp_path / "a.json")])
    cli.main([*args, "--out", str(tmp_path / "b.json"), "--jobs", "2"])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_config_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"primes": [5], "s_max": 1, "families": ["half"], "seed": 9}))
    _, rep = run(["hyperg", "--config", str(conf)], tmp_path)
    assert rep["config"] == {"primes": [5], "s_max": 1, "families": ["HALF"], "samples": 50, "seed": 9}
    _, rep = run(["hyperg", "--config", str(conf), "--primes", "3", "--seed", "1"], tmp_path, "b.json")
    assert rep["config"]["primes"] == [3] and rep["config"]["seed"] == 1 and rep["config"]["s_max"] == 1


def test_stdout_when_no_out(capsys):
    assert cli.main(["thirds", "--primes", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["suite"] == "thirds"


def test_describe(capsys):
    assert cli.main(["describe", "kz"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("kz:") and "eta" in text
    assert cli.main(["describe"]) == 0
    text = capsys.readouterr().out
    assert all(f"{name}:" in text for name in cli.RUNNERS)


def test_all_runs_every_runner(monkeypatch):
    seen = []

    def fake(name):
        def runner(p, cfg):
            seen.append((name, p))
            return [CongruenceReport(name, (p, 1), True)]

        return runner

    monkeypatch.setattr(cli, "RUNNERS", {k: fake(k) for k in cli.RUNNERS})
    reps = cli.collect("all", cli.SuiteConfig(primes=(3, 5)))
    assert len(reps) == 2 * len(cli.RUNNERS)
    assert seen == [(k, p) for k in cli.RUNNERS for p in (3, 5)]


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "padic_periods", "fifths", "--primes", "3", "--s-max", "1", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["summary"]["failed"] == 0
