import io
import json
import subprocess
import sys

import pytest

from closedwords.cli import load_config, main, parse_range


def run(argv, tmp_path):
    out = io.StringIO()
    code = main(argv + ["--cache-dir", str(tmp_path / "cache")], out=out)
    return code, out.getvalue()


def test_parse_range():
    assert parse_range("2..4") == [2, 3, 4]
    assert parse_range("7") == [7]
    assert parse_range("1000,10000") == [1000, 10000]


def test_census_golden(tmp_path, capsys):
    code, text = run(["census", "--q", "2", "--n", "2..3"], tmp_path)
    assert code == 0
    assert text == "n,closed,privileged\n2,2,2\n3,4,4\n"
    assert "hits=0 misses=2" in capsys.readouterr().err
    code, again = run(["census", "--q", "2", "--n", "2..3"], tmp_path)
    assert again == text
    assert "hits=2 misses=0" in capsys.readouterr().err


def test_census_budget_refused(tmp_path, capsys):
    code, _ = run(["census", "--q", "2", "--n", "60..60"], tmp_path)
    assert code != 0
    assert "budget" in capsys.readouterr().err


def test_census_json(tmp_path):
    code, text = run(["census", "--q", "3", "--n", "3", "--format", "json"], tmp_path)
    assert json.loads(text) == {"rows": [{"n": 3, "closed": 9, "privileged": 9}]}


def test_avoid(tmp_path):
    assert run(["avoid", "--q", "2", "--w", "aa", "--n", "4"], tmp_path) == (0, "8\n")
    code, text = run(["avoid", "--q", "2", "--w", "aa", "--n", "4", "--bound"], tmp_path)
    assert text == "avoid=8 lemma1=9 ok\n"


@pytest.mark.parametrize("pattern", ["", "ε", "abc"])
def test_avoid_bad_pattern(tmp_path, pattern):
    with pytest.raises(SystemExit) as exc:
        run(["avoid", "--q", "2", "--w", pattern, "--n", "4"], tmp_path)
    assert exc.value.code == 2


def test_mu(tmp_path):
    code, text = run(["mu", "--q", "2", "--n", "4", "--m", "2", "--bound"], tmp_path)
    assert (code, text) == (0, "mu=8 lemma1=9 ok\n")
    code, text = run(["mu", "--q", "2", "--n", "4", "--m", "2", "--witness"], tmp_path)
    assert text == "mu=8 witness=aa\n"


def test_mu_over_budget(tmp_path):
    code, _ = run(["mu", "--q", "2", "--n", "4", "--m", "12", "--mu-scan-budget", "1024"],
                  tmp_path)
    assert code == 1


def test_verify_passes(tmp_path):
    code, text = run(["verify", "--q", "3", "--n-max", "6", "--suppress-timestamp"], tmp_path)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "check,n,m,lhs,rhs,status"
    assert lines[-1].endswith("failed=0")
    assert "FAIL" not in text


def test_verify_timestamp_line(tmp_path):
    _, text = run(["verify", "--q", "2", "--n-max", "3"], tmp_path)
    assert text.startswith("# generated ")


def test_verify_fault_injection(tmp_path):
    code, text = run(["verify", "--q", "2", "--n-max", "6", "--suppress-timestamp",
                      "--inject-fault"], tmp_path)
    assert code != 0
    failing = [line for line in text.splitlines() if line.endswith("FAIL")]
    # row names the check and carries both sides in exact decimal
    assert "lemma3,6,1,66,2,FAIL" in failing


def test_bounds_needs_census(tmp_path, capsys):
    code, _ = run(["bounds", "--q", "2", "--n", "2..6", "--formula", "thm2"], tmp_path)
    assert code == 1
    assert "census --q 2 --n 2..6" in capsys.readouterr().err


def test_bounds_thm2(tmp_path):
    run(["census", "--q", "2", "--n", "2..14"], tmp_path)
    out_file = tmp_path / "thm2.csv"
    code, text = run(["bounds", "--q", "2", "--n", "2..14", "--formula", "thm2",
                      "--out", str(out_file)], tmp_path)
    assert code == 0
    assert "argmax_n=2" in text
    rows = out_file.read_text().splitlines()
    assert rows[0] == "q,n,exact_count,bound_log,ratio,formula_id"
    assert len(rows) == 14
    assert rows[2].startswith("2,3,4,")


def test_bounds_prop2(tmp_path):
    out_file = tmp_path / "p.json"
    code, text = run(["bounds", "--formula", "prop2", "--n", "1000,10000,100000,1000000",
                      "--format", "json", "--out", str(out_file)], tmp_path)
    assert code == 0
    data = json.loads(out_file.read_text())
    values = [r["ratio"] for r in data["rows"]]
    assert values[0] == pytest.approx(0.9762, abs=1e-3)
    assert values[-1] == pytest.approx(0.99990, abs=1e-4)
    assert "not e" in text


def test_bounds_lemma4(tmp_path):
    code, text = run(["bounds", "--formula", "lemma4", "--q", "2", "--n", "2..5000",
                      "--kappa", "2", "--out", str(tmp_path / "l4.csv")], tmp_path)
    assert code == 0
    assert "c_star=1.7320508075688774 argmax_n=3" in text


def test_report(tmp_path):
    code, text = run(["report", "--q", "2", "--n", "2..8", "--suppress-timestamp",
                      "--out-dir", str(tmp_path / "rep")], tmp_path)
    assert code == 0
    formulas = [line.split(",")[0] for line in text.splitlines()[1:]]
    assert formulas == ["prop2", "thm1", "cor1", "lemma4", "prop3", "thm2", "eq1"]
    assert (tmp_path / "rep" / "thm2_q2.csv").exists()


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "cw.conf"
    cfg.write_text("# defaults for sweeps\nq=3\nmu_scan_budget=2**10\nkappa = 3\n")
    loaded = load_config(cfg)
    assert (loaded.q, loaded.mu_scan_budget, loaded.kappa) == (3, 1024, 3.0)
    monkeypatch.setenv("CLOSEDWORDS_CONFIG", str(cfg))
    assert run(["avoid", "--w", "ab", "--n", "2"], tmp_path) == (0, "8\n")
    # flags win over the file
    assert run(["avoid", "--q", "2", "--w", "ab", "--n", "2"], tmp_path) == (0, "3\n")


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("colour=blue\n")
    with pytest.raises(ValueError):
        load_config(cfg)
    with pytest.raises(SystemExit):
        run(["avoid", "--config", str(cfg), "--w", "a", "--n", "1"], tmp_path)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "closedwords", "mu", "--q", "2", "--n", "4", "--m", "2",
         "--bound", "--cache-dir", str(tmp_path)],
        capture_output=True, text=True, check=True)
    assert proc.stdout == "mu=8 lemma1=9 ok\n"
