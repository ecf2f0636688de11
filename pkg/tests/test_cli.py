import json
from pathlib import Path

import pytest

from main import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main, parseArgs, rest_as_overrides
from utils.error import ConfigValueError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def read_json(path: Path) -> dict:
    with open(path) as f:
        return json.load(f)


def test_overrides_from_the_command_line():
    args, pairs = parseArgs(["train", "--seed", "4", "--train.n_regens", "10", "--basis.K=5"])
    assert args.command == "train"
    assert args.seed == 4
    assert pairs == [("train.n_regens", "10"), ("basis.K", "5")]


def test_malformed_overrides():
    with pytest.raises(ConfigValueError):
        rest_as_overrides(["stray"])
    with pytest.raises(ConfigValueError):
        rest_as_overrides(["--train.eta"])


def test_missing_seed(tmp_path):
    assert main(["asymptotics", "--out", str(tmp_path)]) == EXIT_VALIDATION


def test_unknown_key(tmp_path):
    assert main(["sweep", "--seed", "1", "--out", str(tmp_path), "--foo.bar", "3"]) == EXIT_VALIDATION


def test_unreadable_config(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "none.qcd"), "--out", str(tmp_path)]) == EXIT_VALIDATION


def test_parse_only(capsys):
    assert main(["train", "--config", str(CONFIGS / "model1a.qcd"), "--parse"]) == EXIT_OK
    assert "kappa" in capsys.readouterr().out


def test_asymptotics_run(tmp_path):
    code = main(["asymptotics", "--config", str(CONFIGS / "model1a.qcd"), "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = read_json(tmp_path / "asymptotics.json")
    assert out["seed"] == 1
    assert len(out["config_hash"]) == 16
    summary = out["components"][0]["summary"]
    assert summary["rstar"] == pytest.approx(0.02, abs=1e-5)
    assert summary["v_plus"] == pytest.approx(1.0, abs=1e-4)
    assert out["shifts"][0] == pytest.approx(0.02, abs=1e-5)
    assert [row["kappa"] for row in out["components"][0]["table"]] == out["config"]["asymptotics"]["kappas"]
    assert read_json(tmp_path / "resolved_config.json")["command"] == "asymptotics"


def test_sweep_writes_tables(tmp_path):
    code = main(
        [
            "sweep",
            "--config", str(CONFIGS / "model1a.qcd"),
            "--out", str(tmp_path),
            "--eval.n_paths", "200",
            "--eval.grid", "{ lo = 0.5; hi = 5.0; points = 10 }",
        ]
    )
    assert code == EXIT_OK
    lines = (tmp_path / "threshold_table.csv").read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[1] == "h,mde,mdd,se_mde,se_mdd"
    assert len(lines) == 12
    stars = read_json(tmp_path / "cusum_star.json")["components"][0]["cusum_star"]
    assert [s["kappa"] for s in stars] == [2.0, 27.0, 100.0]


def test_contraction_run(tmp_path):
    code = main(["meanflow", "contraction", "--seed", "2", "--out", str(tmp_path), "--meanflow.delta_states", "2"])
    assert code == EXIT_OK
    out = read_json(tmp_path / "meanflow.json")
    assert out["mode"] == "contraction"
    assert out["report"]["rho_hat"] < 1.0
    assert out["ratio_search"] <= out["report"]["rho_hat"] + 1e-9


def test_numerical_failure_exit_code(tmp_path):
    # a one-step episode cap cannot hold a regeneration cycle
    code = main(
        [
            "train",
            "--config", str(CONFIGS / "model1a.qcd"),
            "--out", str(tmp_path),
            "--basis.n_paths", "50",
            "--train.n_regens", "50",
            "--train.explore_p", "0.01",
            "--train.episode_cap", "1",
        ]
    )
    assert code == EXIT_NUMERICAL
