"""Command-line interface.

Subcommands::

    tsclust synth   --out data.csv [--k-subspaces 3 ...]
    tsclust cluster --data data.csv --out-dir run/ [--config run.cfg] [...]
    tsclust eval    --pred labels.txt --truth data.labels
    tsclust trace   run/            (or run/trace.csv)

``cluster`` reads an optional key-value config file whose keys are the long
flag names (``variant = TLRR``, ``mu-c = 0.01``); flags on the command line
override it.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical failure.
"""

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, NumericalError, TscError
from .experiment import ExperimentConfig, run_experiment
from .io import labels_path_for, load_labels, read_config, read_trace, save_dataset
from .kernels import KernelSpec
from .metrics import evaluate
from .synthetic import SyntheticSpec, generate_synthetic
from .transform import Hyperparams


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _bool(s):
    if isinstance(s, bool):
        return s
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _optional_float(s):
    return None if str(s).lower() in ("none", "") else float(s)


# key -> converter for everything `cluster` accepts from flags or a config file
CLUSTER_KEYS = {
    "data": str,
    "labels": str,
    "synthetic": _bool,
    "k_subspaces": int,
    "ambient_dim": int,
    "subspace_dim": int,
    "points_per_subspace": int,
    "noise_sigma": float,
    "data_seed": int,
    "variant": str,
    "lam": float,
    "mu": float,
    "gamma": float,
    "mu_c": _optional_float,
    "max_outer_iters": int,
    "tol_rel": float,
    "inner_iters": int,
    "inner_tol": float,
    "kernel": str,
    "degree": int,
    "offset": float,
    "bandwidth": str,
    "affinity": str,
    "k": int,
    "seed": int,
    "restarts": int,
    "n_init": int,
    "piecemeal": _bool,
    "out_dir": str,
}
ALIASES = {"lambda": "lam", "out": "out_dir", "outer_iters": "max_outer_iters"}

_SYNTH_FIELDS = (
    ("k_subspaces", int, 3),
    ("ambient_dim", int, 30),
    ("subspace_dim", int, 3),
    ("points_per_subspace", int, 20),
    ("noise_sigma", float, 0.01),
)


def _add_synth_flags(p, with_seed_name):
    for name, typ, default in _SYNTH_FIELDS:
        p.add_argument("--" + name.replace("_", "-"), type=typ, default=argparse.SUPPRESS,
                       help=f"(default {default})")
    p.add_argument("--" + with_seed_name, type=int, default=argparse.SUPPRESS,
                   help="generator seed (default 7)")


def build_parser():
    parser = _Parser(prog="tsclust", description="Transformed subspace clustering")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="write a synthetic union-of-subspaces dataset")
    p.add_argument("--out", required=True, help="dataset CSV path; labels go next to it")
    _add_synth_flags(p, "seed")

    p = sub.add_parser("cluster", help="run an experiment")
    S = argparse.SUPPRESS
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--data", default=S, help="dataset CSV (samples as rows)")
    p.add_argument("--labels", default=S, help="ground-truth labels file")
    p.add_argument("--synthetic", action="store_const", const=True, default=S,
                   help="use a generated dataset instead of --data")
    _add_synth_flags(p, "data-seed")
    p.add_argument("--variant", default=S, help="TLLMC, TSSC or TLRR (default TSSC)")
    p.add_argument("--lambda", "--lam", dest="lam", type=float, default=S)
    p.add_argument("--mu", type=float, default=S)
    p.add_argument("--gamma", type=float, default=S)
    p.add_argument("--mu-c", type=float, default=S)
    p.add_argument("--max-outer-iters", type=int, default=S)
    p.add_argument("--tol-rel", type=float, default=S)
    p.add_argument("--inner-iters", type=int, default=S)
    p.add_argument("--inner-tol", type=float, default=S)
    p.add_argument("--kernel", default=S, help="linear, polynomial, gaussian or laplacian")
    p.add_argument("--degree", type=int, default=S)
    p.add_argument("--offset", type=float, default=S)
    p.add_argument("--bandwidth", default=S, help="positive number or 'auto'")
    p.add_argument("--affinity", default=S, choices=["abs", "llmc", "lrr"])
    p.add_argument("--k", type=int, default=S, help="number of clusters")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--restarts", type=int, default=S, help="k-means repeats to average over")
    p.add_argument("--n-init", type=int, default=S, help="k-means++ inits per repeat")
    p.add_argument("--piecemeal", action="store_const", const=True, default=S)
    p.add_argument("--out-dir", "--out", dest="out_dir", default=S)

    p = sub.add_parser("eval", help="metrics for a predicted/true labels pair")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)

    p = sub.add_parser("trace", help="print a normalized-objective trace")
    p.add_argument("path", help="trace.csv or a run directory")
    return parser


def _merge(file_values, flag_values):
    merged = {}
    for source in (file_values, flag_values):
        for key, value in source.items():
            key = ALIASES.get(key, key)
            if key not in CLUSTER_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                merged[key] = CLUSTER_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from None
    return merged


def config_from_values(values):
    """Build an :class:`ExperimentConfig` from a dict of already-typed values."""
    v = dict(values)
    hp_kwargs = {
        k: v[k]
        for k in ("lam", "mu", "gamma", "mu_c", "max_outer_iters", "tol_rel", "inner_iters", "inner_tol")
        if k in v
    }
    hp = Hyperparams(**hp_kwargs)

    kernel = None
    fam = v.get("kernel")
    if fam and fam.lower() != "none":
        kernel = KernelSpec(
            family=fam,
            degree=v.get("degree", 2),
            offset=v.get("offset", 1.0),
            bandwidth=v.get("bandwidth", "auto"),
        )

    synthetic = None
    if v.get("synthetic") or ("data" not in v and any(k for k, _, _ in _SYNTH_FIELDS if k in v)):
        kw = {k: v[k] for k, _, _ in _SYNTH_FIELDS if k in v}
        if "data_seed" in v:
            kw["seed"] = v["data_seed"]
        synthetic = SyntheticSpec(**kw)
    if synthetic is None and "data" not in v:
        raise ConfigError("no input: pass --data PATH or --synthetic")

    return ExperimentConfig(
        data=v.get("data"),
        labels=v.get("labels"),
        synthetic=synthetic,
        variant=v.get("variant", "TSSC"),
        hp=hp,
        kernel=kernel,
        affinity=v.get("affinity", "abs"),
        k=v.get("k"),
        seed=v.get("seed", 0),
        restarts=v.get("restarts", 10),
        n_init=v.get("n_init", 10),
        piecemeal=v.get("piecemeal", False),
        out_dir=v.get("out_dir"),
    )


def _cmd_synth(args):
    kw = {k: getattr(args, k) for k, _, _ in _SYNTH_FIELDS if hasattr(args, k)}
    if hasattr(args, "seed"):
        kw["seed"] = args.seed
    x, labels = generate_synthetic(SyntheticSpec(**kw))
    save_dataset(args.out, x, labels)
    print(f"wrote {x.shape[1]} samples of dimension {x.shape[0]} to {args.out}")
    print(f"labels in {labels_path_for(args.out)}")
    return 0


def _cmd_cluster(args):
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    file_values = read_config(args.config) if args.config else {}
    cfg = config_from_values(_merge(file_values, flags))
    result = run_experiment(cfg)
    if result.summary is not None:
        for name, stats in result.summary.items():
            print(f"{name:10s} {stats['mean']:.4f} +/- {stats['std']:.4f}")
    else:
        print("no ground truth; metrics skipped")
    if result.degenerate:
        print("warning: degenerate clustering in at least one repeat", file=sys.stderr)
    if cfg.out_dir:
        print(f"results in {cfg.out_dir}")
    return 0


def _cmd_eval(args):
    pred = load_labels(args.pred)
    truth = load_labels(args.truth)
    report = evaluate(pred, truth)
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_trace(args):
    for it, val in read_trace(args.path):
        print(f"{it}\t{val:.10g}")
    return 0


COMMANDS = {"synth": _cmd_synth, "cluster": _cmd_cluster, "eval": _cmd_eval, "trace": _cmd_trace}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except TscError as exc:
        print(f"tsclust: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"tsclust: numerical failure: {exc}", file=sys.stderr)
        return NumericalError.exit_code


if __name__ == "__main__":
    sys.exit(main())
