"""
Command-line driver.

    python main.py SUBCOMMAND [--config FILE] [--seed N] [--threads N] [--out DIR] [-v]
                              [--a.b.c VALUE ...]

Every other `--a.b.c VALUE` pair overrides one config key after the file is read.
Exit code 0 on success, 2 on a validation error, 3 on a numerical failure.
"""

import argparse
import logging
import os
import sys
from typing import Any, Callable, Optional, Union

import numpy as np

from backend.asymptotics import Anchor, asymptotics_table, summarize
from backend.basis import RbfBasis
from backend.evaluation import (
    AlwaysStop,
    BoxRule,
    GreedyPolicy,
    ThresholdRule,
    ThresholdTable,
    batch_means,
    cusum_star,
    decision_region,
    eval_policy,
    histogram_rows,
    shiryaev_eval,
    shiryaev_grid,
    threshold_sweep,
)
from backend.meanflow import (
    FiniteInstance,
    contraction_check,
    counterexample_instance,
    estimate_barf,
    integrate_flow,
    qcd_flow,
    radial_growth,
    random_instance,
    ratio_search,
    unit_directions,
)
from backend.qlearn import (
    QFunction,
    TrainConfig,
    TrainResult,
    conditional_cost_curve,
    projection_check,
    threshold_grid,
    threshold_of,
    train,
)
from backend.sis import SisSpec
from frontend.ast.tree import Document, Entry, IntLiteral, KeyPath, StringLiteral
from frontend.builder import Builder, load_theta
from frontend.parser import parse_config, parse_json
from frontend.recipes import RECIPES, recipe
from frontend.typecheck.namer import Namer, parse_overrides
from frontend.typecheck.typer import Typer
from utils.artifacts import ArtifactWriter
from utils.error import (
    ConfigMissingKeyError,
    ConfigValueError,
    DimensionMismatchError,
    QcdNumericalError,
    QcdValidationError,
)
from utils.printtree import render_tree

_log = logging.getLogger("qcdq")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
OUTPUT_ROOT_ENV = "QCDQ_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "runs"
MEANFLOW_MODES = ("flow", "counterexample", "contraction")
COUNTEREXAMPLE_GAMMA = 0.99

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def parseArgs(argv: Optional[list[str]] = None) -> tuple[argparse.Namespace, list[tuple[str, str]]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="experiment config; a .json file is read as JSON")
    common.add_argument("--seed", type=int, help="master seed, overrides the config")
    common.add_argument("--threads", type=int, help="worker processes for path-parallel work")
    common.add_argument("--out", type=str, help="output directory")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--parse", action="store_true", help="print the parsed config and exit")

    parser = argparse.ArgumentParser(
        description="Bayesian quickest change detection with Q-learning",
        epilog="Any other --a.b.c VALUE pair overrides the config key a.b.c.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in STEPS:
        p = sub.add_parser(name, parents=[common])
        if name == "meanflow":
            p.add_argument("mode", nargs="?", choices=MEANFLOW_MODES, help="defaults to meanflow.mode")
        elif name == "recipe":
            p.add_argument("recipe", choices=sorted(RECIPES))
    args, rest = parser.parse_known_args(argv)
    return args, rest_as_overrides(rest)


def rest_as_overrides(rest: list[str]) -> list[tuple[str, str]]:
    """`--a.b VALUE` and `--a.b=VALUE` pairs."""
    pairs = []
    i = 0
    while i < len(rest):
        tok = rest[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise ConfigValueError(tok, "is not a --key VALUE override")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(rest):
            value = rest[i + 1]
            i += 2
        else:
            raise ConfigValueError(key, "override needs a value")
        pairs.append((key, value))
    return pairs


def readCode(fileName: str) -> str:
    with open(fileName, "r") as f:
        return f.read()


# The parser stage: config text -> AST (or the JSON key tree)
def step_parse(args: argparse.Namespace) -> Union[Document, dict]:
    if args.command == "recipe":
        return recipe(args.recipe)
    if args.config is None:
        return {}
    try:
        code = readCode(args.config)
    except OSError as e:
        raise ConfigValueError("--config", "cannot be read: %s" % e) from None
    if args.config.endswith(".json"):
        return parse_json(code)
    return parse_config(code)


# The resolution stage: AST + overrides -> resolved config
def step_resolve(args: argparse.Namespace, source: Union[Document, dict], pairs: list[tuple[str, str]]) -> dict:
    entries = parse_overrides(pairs)
    if args.seed is not None:
        entries.append(Entry(KeyPath("seed"), IntLiteral(args.seed)))
    if args.threads is not None:
        entries.append(Entry(KeyPath("threads"), IntLiteral(args.threads)))
    if args.out is not None:
        entries.append(Entry(KeyPath("output_dir"), StringLiteral(args.out)))
    if getattr(args, "mode", None) is not None:
        entries.append(Entry(KeyPath("meanflow", "mode"), StringLiteral(args.mode)))
    tree = Namer().transform(source, entries)
    return Typer().transform(tree)


def output_dir(config: dict, command: str) -> str:
    if config["output_dir"]:
        return config["output_dir"]
    root = os.environ.get(OUTPUT_ROOT_ENV, DEFAULT_OUTPUT_ROOT)
    return os.path.join(root, config["name"], command)


def _stars(table: ThresholdTable, kappas: list[float]) -> list[dict]:
    rows = []
    for kappa in kappas:
        h, j = cusum_star(table, kappa)
        rows.append({"kappa": kappa, "h": h, "J": j})
    return rows


def _table_name(stem: str, i: int, spec: SisSpec) -> str:
    return "%s.csv" % stem if spec.dimension == 1 else "%s_%d.csv" % (stem, i)


def _sweep(b: Builder, spec: SisSpec, n_paths: Optional[int] = None) -> ThresholdTable:
    e = b.block("eval")
    n = e["n_paths"] if n_paths is None else n_paths
    return threshold_sweep(b.model(), spec, b.eval_grid(), n, b.seed, e["cap"], b.config["threads"])


def _threshold_record(qf: QFunction, eta: float) -> Any:
    h = threshold_of(qf, threshold_grid(eta))
    return h if isinstance(h, float) else h.describe()


def _write_train(w: ArtifactWriter, result: TrainResult, basis: RbfBasis, config: TrainConfig, tag: str = "") -> None:
    payload: dict[str, Any] = {"result": result.describe(), "kappa": config.kappa}
    if basis.sis_dimension == 1:
        payload["threshold"] = _threshold_record(result.qfunction(basis), config.eta)
        if result.theta_pr is not None:
            payload["threshold_pr"] = _threshold_record(result.qfunction(basis, averaged=True), config.eta)
    w.write_json("train_result%s.json" % tag, payload)
    header = ["k"] + ["theta_%d" % i for i in range(result.iterate_theta.shape[1])]
    w.write_csv("iterates%s.csv" % tag, header, ([k, *th] for k, th in zip(result.iterate_k, result.iterate_theta)))


def step_asymptotics(b: Builder, w: ArtifactWriter) -> None:
    a = b.block("asymptotics")
    spec = b.sis()
    components = []
    for i, c in enumerate(spec.components):
        summary = summarize(b.profile(c.drift))
        anchor = None
        if a["anchor_paths"] > 0:
            h, j = cusum_star(_sweep(b, spec.component(i), a["anchor_paths"]), a["anchor_kappa"])
            anchor = Anchor(a["anchor_kappa"], h, j)
        components.append(
            {
                "index": i,
                "kind": c.kind.value,
                "drift": c.drift.describe(),
                "summary": summary.as_dict(),
                "table": asymptotics_table(summary, a["kappas"], anchor),
            }
        )
    w.write_json("asymptotics.json", {"components": components, "shifts": b.shifts})


def step_sweep(b: Builder, w: ArtifactWriter) -> None:
    spec = b.sis()
    components = []
    for i in range(spec.dimension):
        table = _sweep(b, spec.component(i))
        w.write_csv(_table_name("threshold_table", i, spec), table.header, table.rows())
        components.append({"index": i, "capped": table.capped, "cusum_star": _stars(table, b.kappas())})
    w.write_json("cusum_star.json", {"components": components, "shifts": b.shifts})


def step_shiryaev(b: Builder, w: ArtifactWriter) -> None:
    e = b.block("eval")
    res = shiryaev_eval(
        b.model(),
        shiryaev_grid(b.block("shiryaev")["points"]),
        e["n_paths"],
        b.seed,
        prior=b.shiryaev_prior(),
        cap=e["cap"],
        threads=b.config["threads"],
    )
    w.write_csv("shiryaev_table.csv", res.table.header, res.table.rows())
    w.write_json("shiryaev.json", {"prior_p": res.prior_p, "optima": _stars(res.table, b.kappas())})


def step_train(b: Builder, w: ArtifactWriter) -> None:
    model, spec = b.model(), b.sis()
    basis = b.basis()
    w.write_json("basis.json", {"basis": basis.to_dict()})
    config = b.train_config()
    result = train(model, spec, basis, config)
    _write_train(w, result, basis, config)

    t = b.block("train")
    qf = result.qfunction(basis)
    if t["projection_samples"] > 0:
        hat, ls = projection_check(
            qf, model, spec, config.kappa, config.eta, config.explore_p, t["projection_samples"], b.seed
        )
        rel = float(np.linalg.norm(hat - ls) / max(np.linalg.norm(ls), 1e-300))
        w.write_json("projection.json", {"theta1_hat": hat, "theta1_ls": ls, "relative_error": rel})
    if t["eagerness_bins"] > 0 and spec.dimension == 1:
        curve = conditional_cost_curve(
            qf, model, spec, config.kappa, config.eta, config.explore_p,
            t["eagerness_bins"], t["eagerness_samples"], b.seed,
        )
        w.write_csv(
            "eagerness.csv",
            ("lo", "hi", "count", "mean_stop_cost", "q_stop"),
            ((c.lo, c.hi, c.count, c.mean_stop_cost, c.q_stop) for c in curve),
        )


def _policy_factory(b: Builder) -> Callable[[float], Any]:
    e = b.block("eval")
    kind = e["policy"]
    spec = b.sis()
    if kind == "greedy":
        if e["theta_file"] is None:
            raise ConfigMissingKeyError("eval.theta_file")
        policy = GreedyPolicy(load_theta(e["theta_file"], b.basis(), e["averaged"]))
        return lambda kappa: policy
    if kind in ("threshold", "box"):
        h = e["h"]
        if kind == "threshold":
            if not h:
                raise ConfigMissingKeyError("eval.h")
            return lambda kappa: ThresholdRule(h[0])
        if len(h) != spec.dimension:
            raise DimensionMismatchError("eval.h", spec.dimension, len(h))
        return lambda kappa: BoxRule(tuple(h))
    if kind == "always_stop":
        return lambda kappa: AlwaysStop()
    table = _sweep(b, spec)
    return lambda kappa: ThresholdRule(cusum_star(table, kappa)[0])


def step_eval(b: Builder, w: ArtifactWriter) -> None:
    e = b.block("eval")
    model, spec = b.model(), b.sis()
    policy_for = _policy_factory(b)
    reports = []
    for kappa in b.kappas():
        policy = policy_for(kappa)
        rep = eval_policy(model, spec, policy, kappa, e["n_paths"], b.seed, e["cap"], b.config["threads"])
        reports.append({"policy": policy.describe(), **rep.describe()})
    w.write_json("eval_report.json", {"reports": reports, "shifts": b.shifts})


def _counterexample(b: Builder, m: dict) -> dict:
    gamma = COUNTEREXAMPLE_GAMMA if m["gamma"] is None else m["gamma"]
    est = counterexample_instance(m["xi"], m["n_samples"], b.seed, gamma)
    dirs = unit_directions(est.dimension, m["directions"], b.seed)
    radial = []
    for theta in dirs:
        value, se = radial_growth(est, theta)
        radial.append({"theta": theta, "value": value, "se": se})
    psi0 = est.psi(est.s, np.zeros(est.n_samples, dtype=np.int64))
    traj = integrate_flow(est, m["theta_norm"] * dirs[0], m["dt"], m["t_end"])
    return {
        "params": est.params,
        "radial": radial,
        # symmetric chain: E[(theta psi)_-^2] is half of E[(theta psi)^2]
        "r_minus": est.negative_second_moment(np.ones(est.dimension)),
        "r_half": 0.5 * float(np.mean(psi0[:, 0] ** 2)),
        "trajectory": traj.describe(),
    }


def _contraction(b: Builder, m: dict) -> dict:
    inst = random_instance(m["states"], m["features"], b.seed, m["delta_states"])
    if m["constant_features"]:
        inst = FiniteInstance(inst.P, np.ones((m["states"], 1)), inst.delta)
    report = contraction_check(inst)
    return {
        "report": report.describe(),
        "ratio_search": ratio_search(inst, m["directions"], b.seed),
        "directions": m["directions"],
        "matrices": inst.matrices(),
    }


def _flow(b: Builder, m: dict) -> dict:
    model, spec = b.model(), b.sis()
    basis = b.basis()
    t = b.block("train")
    gamma = t["gamma"] if m["gamma"] is None else m["gamma"]
    kappa = model.kappa if t["kappa"] is None else t["kappa"]
    est = qcd_flow(model, spec, basis, kappa, t["eta"], t["explore_p"], gamma, m["n_samples"], b.seed, m["burn_in"])
    theta_ref = None if m["theta_file"] is None else load_theta(m["theta_file"], basis).theta
    theta0 = m["theta_norm"] * unit_directions(est.dimension, 1, b.seed)[0]
    f0, f0_se = estimate_barf(est, theta0)
    traj = integrate_flow(est, theta0, m["dt"], m["t_end"], theta_ref)
    r, _ = est.r_hat()
    K = basis.size
    return {
        "params": est.params,
        "barf_theta0": {"theta": theta0, "value": f0, "se": f0_se},
        "off_block_max": float(np.abs(r[:K, K:]).max()),
        "trajectory": traj.describe(),
    }


def step_meanflow(b: Builder, w: ArtifactWriter) -> None:
    m = b.block("meanflow")
    run = {"flow": _flow, "counterexample": _counterexample, "contraction": _contraction}[m["mode"]]
    w.write_json("meanflow.json", {"mode": m["mode"], **run(b, m)})


def step_batchmeans(b: Builder, w: ArtifactWriter) -> None:
    bm = b.block("batchmeans")
    model, spec = b.model(), b.sis()
    basis = b.basis()
    table = _sweep(b, spec, bm["table_paths"]) if bm["table_paths"] > 0 and spec.dimension == 1 else None
    report = batch_means(
        model, spec, basis, b.train_config(), bm["M"], b.seed, b.config["threads"], table, bm["same_seed"]
    )
    w.write_json("batch_means.json", report.describe())
    w.write_csv("histogram.csv", ("lo", "hi", "count"), histogram_rows(*report.threshold_hist))
    if report.costs:
        w.write_csv("cost_histogram.csv", ("lo", "hi", "count"), histogram_rows(*report.cost_hist))


def step_region(b: Builder, w: ArtifactWriter) -> None:
    r = b.block("region")
    if r["theta_file"] is None:
        raise ConfigMissingKeyError("region.theta_file")
    qf = load_theta(r["theta_file"], b.basis())
    axis = lambda a: np.linspace(a["lo"], a["hi"], a["points"])  # noqa: E731
    cells = decision_region(qf, axis(r["s1"]), axis(r["s2"]), r["box"])
    w.write_csv("region.csv", ("s1", "s2", "phi", "box"), ((c.s1, c.s2, c.phi, c.box) for c in cells))


def step_recipe(b: Builder, w: ArtifactWriter) -> None:
    """Train at every kappa, evaluate the learned policy and price it against CUSUM* (and Shiryaev)."""
    e = b.block("eval")
    model, spec = b.model(), b.sis()
    threads = b.config["threads"]
    basis = b.basis()
    w.write_json("basis.json", {"basis": basis.to_dict()})

    tables = []
    for i in range(spec.dimension):
        table = _sweep(b, spec.component(i))
        w.write_csv(_table_name("threshold_table", i, spec), table.header, table.rows())
        tables.append(table)
    shiryaev = None
    if spec.dimension == 1 and not model.is_markov():
        shiryaev = shiryaev_eval(
            model, shiryaev_grid(b.block("shiryaev")["points"]), e["n_paths"], b.seed,
            prior=b.shiryaev_prior(), cap=e["cap"], threads=threads,
        )
        w.write_csv("shiryaev_table.csv", shiryaev.table.header, shiryaev.table.rows())

    rows = []
    for kappa in b.kappas():
        config = b.train_config(kappa)
        result = train(model, spec, basis, config)
        _write_train(w, result, basis, config, "_kappa%g" % kappa)
        qf = result.qfunction(basis, averaged=e["averaged"])
        rep = eval_policy(model, spec, GreedyPolicy(qf), kappa, e["n_paths"], b.seed, e["cap"], threads)
        stars = [dict(zip(("h", "J"), cusum_star(t, kappa))) for t in tables]
        row: dict[str, Any] = {
            "kappa": kappa,
            "trained": rep.describe(),
            "cusum_star": stars,
            "ratio_to_cusum_star": rep.cost / min(s["J"] for s in stars),
        }
        if spec.dimension == 1:
            row["threshold"] = _threshold_record(qf, config.eta)
        if shiryaev is not None:
            h, j = cusum_star(shiryaev.table, kappa)
            row["shiryaev"] = {"h": h, "J": j, "prior_p": shiryaev.prior_p}
        rows.append(row)
        _log.info("recipe %s kappa=%g: J=%.6g vs CUSUM* %.6g", b.config["name"], kappa, rep.cost, stars[0]["J"])
    w.write_json("recipe_summary.json", {"recipe": b.config["name"], "shifts": b.shifts, "rows": rows})


STEPS: dict[str, Callable[[Builder, ArtifactWriter], None]] = {
    "train": step_train,
    "eval": step_eval,
    "sweep": step_sweep,
    "shiryaev": step_shiryaev,
    "asymptotics": step_asymptotics,
    "meanflow": step_meanflow,
    "batchmeans": step_batchmeans,
    "region": step_region,
    "recipe": step_recipe,
}


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args, pairs = parseArgs(argv)
    except QcdValidationError as e:
        print(e, file=sys.stderr)
        return EXIT_VALIDATION
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT, stream=sys.stderr)

    try:
        source = step_parse(args)
        if args.parse:
            print(render_tree(source) if isinstance(source, Document) else source)
            return EXIT_OK
        config = step_resolve(args, source, pairs)
        builder = Builder(config)
        writer = ArtifactWriter(output_dir(config, args.command), config, config["seed"])
        writer.write_json("resolved_config.json", {"command": args.command})
        STEPS[args.command](builder, writer)
    except QcdValidationError as e:
        _log.error("%s", e)
        return EXIT_VALIDATION
    except QcdNumericalError as e:
        _log.error("%s", e)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
