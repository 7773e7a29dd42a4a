import json

import pytest
from click.testing import CliRunner

from qvir.cli import main


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False) if "mix_stderr" in CliRunner.__init__.__code__.co_varnames else CliRunner()


def test_verify_bracket_ok(runner):
    res = runner.invoke(main, ["verify", "bracket", "--degree", "2", "--q", "2,3/2"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.stdout)
    assert data["config"]["q"] == ["2", "3/2"]
    assert data["summary"]["failed"] == 0


def test_verify_mutated_sigma_fails(runner):
    res = runner.invoke(main, ["verify", "jacobi", "--degree", "2", "--q", "2", "--mutate", "sigma"])
    assert res.exit_code == 1
    data = json.loads(res.stdout)
    assert "jacobi/sigma_definition/sigma" in data["summary"]["failing_properties"]


def test_verify_honest_failures(runner):
    res = runner.invoke(main, ["verify", "jacobi", "--degree", "2", "--q", "2"])
    assert res.exit_code == 1
    assert json.loads(res.stdout)["summary"]["failing_properties"] == ["jacobi/vir_residual_nonzero/weighted"]


@pytest.mark.parametrize("bad", ["1", "0", "-1", "x", "1/0"])
def test_verify_bad_q(runner, bad):
    res = runner.invoke(main, ["verify", "bracket", "--q", bad])
    assert res.exit_code == 2


def test_seed_env_and_csv(runner, tmp_path):
    out = tmp_path / "r.csv"
    res = runner.invoke(main, ["verify", "classical", "--format", "csv", "--out", str(out)],
                        env={"QVIR_SEED": "17"})
    assert res.exit_code == 0
    text = out.read_text()
    assert text.startswith("suite,property,subject")
    again = tmp_path / "s.csv"
    runner.invoke(main, ["verify", "classical", "--format", "csv", "--out", str(again), "--seed", "17"])
    assert again.read_text() == text
    res = runner.invoke(main, ["verify", "classical"], env={"QVIR_SEED": "abc"})
    assert res.exit_code == 2


def test_unwritable_output(runner, tmp_path):
    res = runner.invoke(main, ["verify", "classical", "--out", str(tmp_path / "no" / "such" / "f.json")])
    assert res.exit_code == 2


def test_derive(runner):
    res = runner.invoke(main, ["derive", "basic", "--n", "4", "--q", "2"])
    assert res.exit_code == 0
    data = json.loads(res.stdout)
    assert data["linear"]["on_mode"]["target"] == 1
    assert data["nonlinear_on_mode"]["difference"] != {}
    assert runner.invoke(main, ["derive", "eq9"]).exit_code == 2


def test_simulate(runner, tmp_path):
    cfg = {"variant": "basic", "c": 0.5, "q": 1.05, "N": 6, "dt": 1e-3, "t_end": 0.01,
           "initial": {"modes": [[1, 0.5, 0.0], [2, 0.25, 0.0]]}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    res = runner.invoke(main, ["simulate", str(p), "--out", str(tmp_path / "out")])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "out" / "modes.csv").exists()
    p.write_text(json.dumps({**cfg, "dt": 10.0}))
    assert runner.invoke(main, ["simulate", str(p), "--out", str(tmp_path / "o2")]).exit_code == 2
    p.write_text(json.dumps({**cfg, "N": 0}))
    assert runner.invoke(main, ["simulate", str(p)]).exit_code == 2


def test_hierarchy(runner, tmp_path):
    p = tmp_path / "u.json"
    p.write_text(json.dumps({"u": {"modes": [[0, "3", "0"]]}, "q": "2"}))
    res = runner.invoke(main, ["hierarchy", str(p)])
    assert res.exit_code == 0, res.output
    data = json.loads(res.stdout)
    assert data["rhs"] == {"modes": [[1, "-7", "0"], [3, "28/5", "0"]]}
    p.write_text(json.dumps({"u": {"modes": [[0, "3", "0"]]}}))
    assert runner.invoke(main, ["hierarchy", str(p)]).exit_code == 2
