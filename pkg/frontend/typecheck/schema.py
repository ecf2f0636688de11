"""
The schema of an experiment config. Every block has defaults except `seed`; a
subcommand that needs a block the config does not define reports it as missing.
"""

from frontend.type import (
    BOOL,
    FLOAT,
    INT,
    STR,
    ArrayType,
    EnumType,
    Field,
    TableType,
    UnionType,
    VariantType,
    opt,
)

LAW = VariantType(
    "law",
    {
        "gaussian": TableType("gaussian", {"mu": Field(FLOAT, 0.0), "sigma": Field(FLOAT, 1.0)}),
        "laplace": TableType("laplace", {"mu": Field(FLOAT, 0.0), "b": Field(FLOAT, 1.0)}),
        "cauchy": TableType("cauchy", {"x0": Field(FLOAT, 0.0), "gamma": Field(FLOAT, 1.0)}),
        "ar1": TableType(
            "ar1",
            {
                "a": Field(FLOAT),
                "sigma_w": Field(FLOAT, 1.0),
                "innovation": Field(EnumType("gaussian", "laplace", "cauchy"), "gaussian"),
            },
        ),
    },
)

CHANGE = VariantType(
    "change",
    {
        "geometric": TableType("geometric", {"p": Field(FLOAT)}),
        "mixture": TableType("mixture", {"w": Field(FLOAT), "p_slow": Field(FLOAT), "p_fast": Field(FLOAT)}),
    },
)

DRIFT = VariantType(
    "drift",
    {
        "iid_llr": TableType("iid_llr", {"breve0": Field(LAW), "breve1": Field(LAW)}),
        "markov_llr": TableType("markov_llr", {"g0": Field(LAW), "g1": Field(LAW)}),
    },
)

SIS_COMPONENT = TableType(
    "sis component",
    {
        "kind": Field(EnumType("cusum", "shiryaev_roberts"), "cusum"),
        "drift": Field(DRIFT),
        # a number, or `rstar` to have the shift computed
        "shift": Field(UnionType(FLOAT, EnumType("rstar")), 0.0),
    },
)

MODEL = TableType(
    "model",
    {
        "pre": Field(LAW),
        "post": Field(LAW),
        "change": Field(CHANGE),
        "kappa": Field(FLOAT, 27.0),
    },
)

ASYMPTOTICS = TableType(
    "asymptotics",
    {
        "hazard": Field(EnumType("p", "tail"), "p"),
        "kappas": Field(ArrayType(FLOAT, 1), [2.0, 5.0, 10.0, 27.0, 50.0, 100.0]),
        "n_mc": Field(INT, 10**7),
        # > 0: anchor the shifted approximations on a sweep of this many paths
        "anchor_paths": Field(INT, 0),
        "anchor_kappa": Field(FLOAT, 100.0),
    },
)

BASIS = TableType(
    "basis",
    {
        "K": Field(INT, 20),
        "b": Field(FLOAT, 0.4),
        "n_paths": Field(INT, 20_000),
        "max_samples": Field(INT, 200_000),
        # load centers and widths from a basis.json instead of fitting
        "file": opt(STR),
    },
)

ZAP = TableType(
    "zap",
    {
        "enabled": Field(BOOL, True),
        "beta0": Field(FLOAT, 1.0),
        "beta_rho": Field(FLOAT, 0.85),
        "ridge": Field(FLOAT, 1e-6),
    },
)

TRAIN = TableType(
    "train",
    {
        "n_regens": Field(INT, 20_000),
        "kappa": opt(FLOAT),
        "alpha0": Field(FLOAT, 1.0),
        "rho": opt(FLOAT),
        "gamma": Field(FLOAT, 1.0),
        "eta": Field(FLOAT, 30.0),
        "explore_p": Field(FLOAT, 0.5),
        "reset_bound": Field(FLOAT, 5e3),
        "theta0_range": Field(FLOAT, 50.0),
        "averaging": Field(BOOL, True),
        "episode_cap": Field(INT, 10**6),
        "log_points": Field(INT, 10**4),
        "zap": Field(ZAP, {}),
        # independent checks run after training; 0 skips them
        "projection_samples": Field(INT, 0),
        "eagerness_bins": Field(INT, 0),
        "eagerness_samples": Field(INT, 10**6),
    },
)

GRID = TableType("grid", {"lo": Field(FLOAT), "hi": Field(FLOAT), "points": Field(INT)})

EVAL = TableType(
    "eval",
    {
        "n_paths": Field(INT, 100_000),
        "kappas": Field(ArrayType(FLOAT), []),
        "policy": Field(EnumType("greedy", "threshold", "box", "always_stop", "cusum_star"), "greedy"),
        "h": Field(ArrayType(FLOAT), []),
        "theta_file": opt(STR),
        "averaged": Field(BOOL, False),
        "cap": Field(INT, 10**6),
        "grid": Field(GRID, {"lo": 0.02, "hi": 20.0, "points": 1000}),
    },
)

SHIRYAEV = TableType(
    "shiryaev",
    {
        "points": Field(INT, 1000),
        # geometric prior of the test; by default the model's own (or the matched one)
        "prior_p": opt(FLOAT),
    },
)

MEANFLOW = TableType(
    "meanflow",
    {
        "mode": Field(EnumType("flow", "counterexample", "contraction"), "flow"),
        "n_samples": Field(INT, 100_000),
        "burn_in": Field(INT, 1000),
        "gamma": opt(FLOAT),
        "dt": Field(FLOAT, 0.05),
        "t_end": Field(FLOAT, 10.0),
        "theta_file": opt(STR),
        "theta_norm": Field(FLOAT, 1.0),
        "directions": Field(INT, 10),
        "xi": Field(FLOAT, 100.0),
        "states": Field(INT, 10),
        "features": Field(INT, 4),
        "delta_states": Field(INT, 0),
        "constant_features": Field(BOOL, False),
    },
)

BATCHMEANS = TableType(
    "batchmeans",
    {
        "M": Field(INT, 40),
        "same_seed": Field(BOOL, False),
        # > 0: sweep a threshold table to price each run's threshold
        "table_paths": Field(INT, 0),
    },
)

AXIS = TableType("axis", {"lo": Field(FLOAT, 0.0), "hi": Field(FLOAT, 30.0), "points": Field(INT, 61)})

REGION = TableType(
    "region",
    {
        "s1": Field(AXIS, {}),
        "s2": Field(AXIS, {}),
        "box": Field(ArrayType(FLOAT), [8.0, 6.0]),
        "theta_file": opt(STR),
    },
)

EXPERIMENT = TableType(
    "experiment",
    {
        "seed": Field(INT),
        "name": Field(STR, "experiment"),
        "output_dir": opt(STR),
        "threads": Field(INT, 1),
        "model": opt(MODEL),
        "sis": opt(ArrayType(SIS_COMPONENT, 1)),
        "asymptotics": Field(ASYMPTOTICS, {}),
        "basis": Field(BASIS, {}),
        "train": Field(TRAIN, {}),
        "eval": Field(EVAL, {}),
        "shiryaev": Field(SHIRYAEV, {}),
        "meanflow": Field(MEANFLOW, {}),
        "batchmeans": Field(BATCHMEANS, {}),
        "region": Field(REGION, {}),
    },
)
