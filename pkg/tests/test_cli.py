import csv
import io
import json
import subprocess
import sys

import pytest

from hopfhe.cli import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER, EXIT_VERIFY, main, parse_alpha_grid, parse_eta


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _strip_time(text: str) -> dict:
    d = json.loads(text)
    d.pop("timestamp")
    return d


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["schema"] == 1 and d["passed"] is True


def test_verify_corrupted(capsys):
    code, out, err = run(capsys, "verify", "--corrupt-table", "--format", "csv")
    assert code == EXIT_VERIFY
    rows = list(csv.DictReader(io.StringIO(out)))
    bad = [r for r in rows if r["status"] == "fail"]
    assert [r["check_name"] for r in bad] == ["∂̄₋α₁"]
    assert "∂̄₋α₁" in err


def test_verify_deterministic(capsys):
    a = _strip_time(run(capsys, "verify")[1])
    b = _strip_time(run(capsys, "verify")[1])
    assert a == b


def test_degree(capsys):
    code, out, _ = run(capsys, "degree", "--eta", "tau^3", "--alpha", "1/3")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["deg_plus_value"] == pytest.approx(3.0)
    assert d["deg_minus_value"] == pytest.approx(-3.0)
    assert d["deg_alpha_value"] == pytest.approx(1 - 2)


def test_degree_polar_unit_circle(capsys):
    code, out, _ = run(capsys, "degree", "--eta", "1@pi/3")
    assert code == EXIT_OK
    assert json.loads(out)["deg_plus_value"] == 0.0


@pytest.mark.parametrize("argv", [
    ("degree", "--eta", "0"),
    ("degree", "--eta", "tau^1", "--tau", "0.5"),
    ("degree", "--eta", "nonsense"),
    ("stability", "--family", "4.11", "--m-plus", "0", "--m-minus", "2"),
    ("stability", "--family", "4.11", "--m-plus", "1"),
    ("continuity", "--alpha", "1.5"),
    ("he-solve", "--profile", "a,b"),
])
def test_config_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert err


def test_bad_solver_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"N": 32, "mystery": 1}')
    code, _, err = run(capsys, "continuity", "--alpha", "0.8", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "mystery" in err


def test_stability_flip(capsys):
    code, out, _ = run(capsys, "stability", "--family", "4.11", "--m-plus", "1", "--m-minus", "2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# alpha0=2/3")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    verdicts = {r["alpha"]: r["verdict"] for r in rows}
    assert verdicts["0.6"] == "stable" and verdicts["0.7"] == "unstable"


def test_stability_4_12_json(capsys):
    code, out, _ = run(capsys, "stability", "--family", "4.12", "--deg-plus-l", "-1", "--m-minus", "2",
                       "--format", "json", "--alpha-grid", "0.5:0.8:0.1")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["alpha0"] == "2/3"
    # the competing line has positive alpha-degree below alpha0
    assert [r["verdict"] for r in d["rows"]] == ["unstable", "unstable", "stable", "stable"]


def test_he_solve(capsys, tmp_path):
    target = tmp_path / "k.json"
    code, _, _ = run(capsys, "he-solve", "--profile", "0.3,1,0.5,0.2", "--alpha", "0.4", "--out", str(target))
    assert code == EXIT_OK
    d = json.loads(target.read_text())
    assert d["residual"] <= 1e-8
    assert d["lambda"] == pytest.approx(0.3)


def test_continuity_unstable_side(capsys):
    code, out, _ = run(capsys, "continuity", "--alpha", "0.8", "--grid-n", "32")
    assert code == EXIT_OK
    tr = json.loads(out)["trace"]
    assert tr["blowup"] is True
    assert tr["destabilizer"]["rank"] == 1


def test_continuity_start_failure_exit_code(capsys):
    code, _, _ = run(capsys, "continuity", "--alpha", "0.8", "--grid-n", "16", "--eps0", "1e-3", "--eps-min", "1e-4")
    assert code in (EXIT_OK, EXIT_SOLVER)


def test_parsers():
    assert [str(a) for a in parse_alpha_grid("0.25:0.75:0.25")] == ["1/4", "1/2", "3/4"]
    eta = parse_eta("2,0")
    assert eta.value_map()
    with pytest.raises(Exception):
        parse_alpha_grid("0.9:0.1:0.1")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hopfhe", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "hopfhe" in res.stdout
