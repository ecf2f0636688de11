import json
from pathlib import Path

import numpy as np
import pytest

from backend.model import Ar1, Geometric, IidGaussian
from backend.sis import SisKind
from frontend.builder import Builder, load_theta
from frontend.parser import parse_config, parse_json
from frontend.recipes import RECIPES, recipe
from frontend.typecheck.namer import Namer, parse_override
from frontend.typecheck.typer import Typer
from backend.basis import RbfBasis
from utils.error import (
    ConfigDuplicateKeyError,
    ConfigMissingKeyError,
    ConfigParseError,
    ConfigTypeError,
    ConfigUnknownKeyError,
    ConfigValueError,
)
from utils.printtree import render_tree

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def resolve(text: str, overrides=()) -> dict:
    entries = [parse_override(k, v) for k, v in overrides]
    return Typer().transform(Namer().transform(parse_config(text), entries))


def test_dotted_keys_and_blocks_merge():
    tree = Namer().transform(parse_config("seed = 3\ntrain.eta = 10.0\ntrain { gamma = 0.5 }"))
    assert tree == {"seed": 3, "train": {"eta": 10.0, "gamma": 0.5}}


def test_duplicate_key():
    with pytest.raises(ConfigDuplicateKeyError, match="'seed'"):
        Namer().transform(parse_config("seed = 1\nseed = 2"))
    with pytest.raises(ConfigDuplicateKeyError, match="'model.kappa'"):
        Namer().transform(parse_config("model.kappa = 2.0\nmodel { kappa = 3.0 }"))


def test_unknown_keys_are_listed_together():
    with pytest.raises(ConfigUnknownKeyError) as info:
        resolve("seed = 1\nfoo = 1\ntrain { zzz = 2 }")
    assert sorted(info.value.paths) == ["foo", "train.zzz"]
    assert "foo, train.zzz" in str(info.value)


def test_unknown_keys_come_before_missing_ones():
    with pytest.raises(ConfigUnknownKeyError):
        resolve("sede = 1")


def test_missing_seed():
    with pytest.raises(ConfigMissingKeyError) as info:
        Typer().transform({})
    assert info.value.path == "seed"


def test_defaults_and_coercions():
    config = resolve("seed = 1\ntrain.n_regens = 2e4\ntrain.kappa = 5")
    assert config["train"]["n_regens"] == 20000
    assert config["train"]["kappa"] == 5.0
    assert config["train"]["zap"]["enabled"] is True
    assert config["threads"] == 1
    assert config["basis"]["n_paths"] == 20_000
    assert config["basis"]["K"] == 20 and config["basis"]["b"] == 0.4
    assert config["model"] is None
    with pytest.raises(ConfigTypeError):
        resolve('seed = "one"')
    with pytest.raises(ConfigTypeError):
        resolve("seed = 1\nmeanflow.mode = sideways")


def test_overrides_rebind_keys():
    config = resolve("seed = 1\ntrain { n_regens = 10 }", [("train.n_regens", "500"), ("seed", "9")])
    assert config["train"]["n_regens"] == 500
    assert config["seed"] == 9


def test_override_values_outside_the_grammar_are_strings():
    entry = parse_override("basis.file", "/tmp/run/basis.json")
    tree = Namer().transform({"seed": 1}, [entry])
    assert tree["basis"]["file"] == "/tmp/run/basis.json"


def test_lex_and_syntax_errors():
    with pytest.raises(ConfigParseError, match="Lex error"):
        parse_config("seed = 1 @")
    with pytest.raises(ConfigParseError, match="Syntax error"):
        parse_config("seed = = 1")


def test_json_configs():
    tree = parse_json('{"seed": 2, "train": {"eta": 12}}')
    config = Typer().transform(Namer().transform(tree))
    assert config["train"]["eta"] == 12.0
    with pytest.raises(ConfigDuplicateKeyError):
        parse_json('{"seed": 1, "seed": 2}')
    with pytest.raises(ConfigTypeError):
        parse_json("[1, 2]")
    with pytest.raises(ConfigParseError):
        parse_json("{seed: 1}")


@pytest.mark.parametrize("name", sorted(RECIPES))
def test_recipes_resolve(name):
    config = Typer().transform(Namer().transform(recipe(name)))
    assert config["name"] == name
    assert config["eval"]["kappas"] == [2.0, 27.0, 100.0]


def test_unknown_recipe():
    with pytest.raises(ConfigValueError):
        recipe("model9z")


def test_recipe_copies_are_independent():
    a = recipe("model1a")
    a["seed"] = 99
    assert recipe("model1a")["seed"] == 1


def test_sample_configs_resolve():
    for path in sorted(CONFIGS.glob("*.qcd")):
        config = Typer().transform(Namer().transform(parse_config(path.read_text())))
        assert config["seed"] == 1
        assert len(config["sis"]) == 1


def test_builder_model1a():
    b = Builder(Typer().transform(Namer().transform(recipe("model1a"))))
    model = b.model()
    assert model.pre == IidGaussian(0.0, 1.0)
    assert model.change == Geometric(0.02)
    spec = b.sis()
    assert spec.dimension == 1
    assert spec.components[0].kind == SisKind.CUSUM
    assert b.shifts == [0.02]
    assert b.train_config().kappa == 27.0
    assert b.train_config(kappa=2.0, seed=5).seed == 5
    assert b.kappas() == [2.0, 27.0, 100.0]


def test_builder_resolves_rstar():
    tree = recipe("model1a")
    tree["sis"][0]["shift"] = "rstar"
    b = Builder(Typer().transform(Namer().transform(tree)))
    b.sis()
    assert b.shifts[0] == pytest.approx(0.02, abs=1e-6)


def test_builder_markov_model():
    b = Builder(Typer().transform(Namer().transform(recipe("model2a"))))
    assert b.model().pre == Ar1(0.8, 1.0)
    assert b.model().is_markov()


def test_builder_reports_missing_blocks():
    b = Builder(Typer().transform({"seed": 1}))
    with pytest.raises(ConfigMissingKeyError, match="'model'"):
        b.model()


def test_markov_drift_needs_ar1_design():
    tree = recipe("model2a")
    tree["sis"][0]["drift"]["params"]["g0"] = {"kind": "gaussian", "params": {}}
    b = Builder(Typer().transform(Namer().transform(tree)))
    with pytest.raises(ConfigValueError):
        b.sis()


def test_eval_grid_validation():
    tree = recipe("model1a")
    tree["eval"]["grid"] = {"lo": 0.0, "hi": 5.0, "points": 10}
    b = Builder(Typer().transform(Namer().transform(tree)))
    with pytest.raises(ConfigValueError):
        b.eval_grid()


def test_load_theta(tmp_path):
    basis = RbfBasis.from_centers(np.array([[0.0], [1.0]]), 0.4)
    result = tmp_path / "train_result.json"
    result.write_text(json.dumps({"result": {"theta_final": [1, 2, 3, 4], "theta_pr": [5, 6, 7, 8]}}))
    assert load_theta(str(result), basis).theta.tolist() == [1, 2, 3, 4]
    assert load_theta(str(result), basis, averaged=True).theta.tolist() == [5, 6, 7, 8]
    bare = tmp_path / "theta.json"
    bare.write_text("[0, 0, 1, 1]")
    assert load_theta(str(bare), basis).theta1.tolist() == [1.0, 1.0]


def test_render_tree():
    text = render_tree(parse_config("seed = 1\nmodel { kappa = 2.0 }"))
    assert "seed" in text and "kappa" in text
