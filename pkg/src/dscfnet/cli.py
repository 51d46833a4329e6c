"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on data or solver errors.
Wall-clock timings go to standard error only, so every file written is a
deterministic function of the inputs and seeds.
"""

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import export
from .datasets import generate_synthetic, load_dataset, save_dataset
from .model import ModelConfig, coefficient_matrix, train
from .protocols import (
    DEFAULT_NOISE_LEVELS,
    MethodSpec,
    NoiseSpec,
    grid_search,
    layer_sweep,
    noise_sweep,
    run_protocol,
)

logger = logging.getLogger("dscfnet")

DEFAULTS = {
    "alpha": 1e4,
    "beta": 1e4,
    "gamma": 1e4,
    "epsilon": 1e-3,
    "max_iters": 500,
    "layers": 3,
    "layer_dims": None,
    "seed": 0,
    "delta": 1e-8,
    "eps_div": 1e-12,
    "warm_start": False,
    "kmeans_restarts": 10,
    "trials": 30,
    "pixel_fraction": 0.3,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def resolve_config(path=None, **overrides):
    """Merge defaults, an optional JSON config file and CLI overrides."""
    cfg = dict(DEFAULTS)
    if path:
        with open(path) as fh:
            user = json.load(fh)
        unknown = set(user) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(user)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    if cfg["layer_dims"] is not None:
        cfg["layer_dims"] = [int(r) for r in cfg["layer_dims"]]
        cfg["layers"] = len(cfg["layer_dims"])
    return cfg


def method_spec(cfg, method="dscf"):
    return MethodSpec(
        method=method,
        n_layers=int(cfg["layers"]),
        alpha=float(cfg["alpha"]),
        beta=float(cfg["beta"]),
        gamma=float(cfg["gamma"]),
        epsilon=float(cfg["epsilon"]),
        max_iters=int(cfg["max_iters"]),
        delta=float(cfg["delta"]),
        eps_div=float(cfg["eps_div"]),
        warm_start=bool(cfg["warm_start"]),
    )


class _Timer:
    def __init__(self, phase):
        self.phase = phase

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        logger.info("%s: %.3f s", self.phase, time.perf_counter() - self.t0)


def cmd_synth(args):
    ds = generate_synthetic(args.classes, args.per_class, args.dim, args.separation, args.spread, args.seed)
    save_dataset(ds, args.out)


def cmd_train(args):
    cfg = resolve_config(args.config, seed=args.seed)
    with _Timer("load"):
        ds = load_dataset(args.data)
    dims = cfg["layer_dims"] or [ds.class_count + 1] * int(cfg["layers"])
    cfg["layer_dims"] = dims
    mc = ModelConfig(
        layer_dims=tuple(dims),
        alpha=float(cfg["alpha"]),
        beta=float(cfg["beta"]),
        gamma=float(cfg["gamma"]),
        epsilon=float(cfg["epsilon"]),
        max_iters=int(cfg["max_iters"]),
        seed=int(cfg["seed"]),
        delta=float(cfg["delta"]),
        eps_div=float(cfg["eps_div"]),
        warm_start=bool(cfg["warm_start"]),
    )
    with _Timer("train"):
        model = train(ds.X, mc)
    prefix = args.out
    export.write_trace_csv(model.traces, f"{prefix}trace.csv")
    arrays = {"V": model.V_final, "E": model.E, "S": model.S}
    arrays.update({f"W{i + 1}": W for i, W in enumerate(model.W)})
    export.save_arrays(f"{prefix}model.npz", **arrays)
    summary = {
        "method": "dscf",
        "config": cfg,
        "data": {"path": str(args.data), "feature_dim": ds.feature_dim, "n_samples": ds.n_samples},
        "layers": [
            {
                "layer": l,
                "iterations": len(model.traces[l]) - 1,
                "converged": model.converged[l],
                "objective_initial": model.traces[l][0].objective,
                "objective_final": model.traces[l][-1].objective,
            }
            for l in sorted(model.traces)
        ],
        "V_shape": list(model.V_final.shape),
    }
    export.write_json(summary, f"{prefix}summary.json")


def cmd_eval(args):
    cfg = resolve_config(args.config, seed=args.seed, trials=args.trials)
    ds = load_dataset(args.data)
    ks = args.k or [2, 3, 4, 5, 6]
    spec = method_spec(cfg, args.method)
    with _Timer("eval"):
        reports = run_protocol(ds, ks, int(cfg["trials"]), [spec], int(cfg["seed"]), int(cfg["kmeans_restarts"]))
    out = {
        "method": spec.label(),
        "config": {**cfg, "ks": ks, "method_spec": spec.to_dict()},
        "results": [{"K": K, **reports[(spec.label(), K)].to_dict()} for K in ks],
    }
    export.write_json(out, args.out)


def cmd_sweep_noise(args):
    cfg = resolve_config(args.config, seed=args.seed, trials=args.trials, pixel_fraction=args.pixel_fraction)
    ds = load_dataset(args.data)
    noise = NoiseSpec(tuple(args.levels), float(cfg["pixel_fraction"]), int(cfg["seed"]))
    specs = [method_spec(cfg, m) for m in args.methods.split(",")]
    with _Timer("sweep-noise"):
        reports = noise_sweep(ds, noise, specs, args.k, int(cfg["trials"]), int(cfg["seed"]), int(cfg["kmeans_restarts"]))
    rows = []
    for spec in specs:
        for level in noise.variance_levels:
            r = reports[(spec.label(), level)]
            rows.append([spec.label(), level, r.ac, r.ac_std, r.fscore, r.f_std])
    export.write_csv(["method", "level", "ac_mean", "ac_std", "f_mean", "f_std"], rows, args.out)
    if args.config_out:
        export.write_json({**cfg, "levels": list(noise.variance_levels), "K": args.k}, args.config_out)


def cmd_sweep_layers(args):
    cfg = resolve_config(args.config, seed=args.seed, trials=args.trials)
    ds = load_dataset(args.data)
    spec = method_spec(cfg, args.method)
    with _Timer("sweep-layers"):
        reports = layer_sweep(ds, args.layers, spec, args.k, int(cfg["trials"]), int(cfg["seed"]), int(cfg["kmeans_restarts"]))
    rows = [[L, reports[L].ac, reports[L].ac_std, reports[L].fscore, reports[L].f_std] for L in args.layers]
    export.write_csv(["layers", "ac_mean", "ac_std", "f_mean", "f_std"], rows, args.out)


def cmd_grid(args):
    cfg = resolve_config(args.config, seed=args.seed, trials=args.trials)
    ds = load_dataset(args.data)
    grid = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma}
    spec = method_spec(cfg)
    with _Timer("grid"):
        best, surface = grid_search(ds, grid, spec, args.k, int(cfg["trials"]), int(cfg["seed"]), int(cfg["kmeans_restarts"]))
    rows = [[p["alpha"], p["beta"], p["gamma"], r.ac, r.ac_std, r.fscore, r.f_std] for p, r in surface]
    export.write_csv(["alpha", "beta", "gamma", "ac_mean", "ac_std", "f_mean", "f_std"], rows, f"{args.out}surface.csv")
    best_ac = max(r.ac for _, r in surface)
    export.write_json({"best": best, "ac_mean": best_ac, "K": args.k, "config": {**cfg, **best}}, f"{args.out}best.json")


def cmd_export_weights(args):
    arrays = export.load_arrays(args.model)
    if args.which == "S":
        M = arrays["S"]
    else:
        n_layers = sum(1 for k in arrays if k.startswith("W"))
        M = arrays["V"]
        for i in range(n_layers, 0, -1):
            M = arrays[f"W{i}"] @ M
    export.export_heatmap(M, args.out, args.format)


def build_parser():
    p = _Parser(prog="dscfnet", description="Deep self-representative concept factorization experiments")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress and timings to stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("synth", help="write a synthetic Gaussian-blob dataset CSV")
    s.add_argument("--classes", type=int, default=3)
    s.add_argument("--per-class", type=int, default=50)
    s.add_argument("--dim", type=int, default=50)
    s.add_argument("--separation", type=float, default=10.0)
    s.add_argument("--spread", type=float, default=10.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    def common(sp):
        sp.add_argument("--data", required=True, help="dataset CSV (label,f0,...)")
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int, help="master seed (overrides config)")

    s = sub.add_parser("train", help="train on a whole dataset; writes summary, trace and factors")
    common(s)
    s.add_argument("--out", required=True, help="output path prefix, e.g. runs/a- or runs/a/")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("eval", help="clustering protocol over random category samples")
    common(s)
    s.add_argument("--k", type=_int_list, help="cluster counts, default 2,3,4,5,6")
    s.add_argument("--trials", type=int)
    s.add_argument("--method", choices=["dscf", "cf", "cascade"], default="dscf")
    s.add_argument("--out", required=True, help="report JSON path")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep-noise", help="AC against Gaussian noise level")
    common(s)
    s.add_argument("--levels", type=_float_list, default=list(DEFAULT_NOISE_LEVELS))
    s.add_argument("--pixel-fraction", type=float)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--trials", type=int)
    s.add_argument("--methods", default="dscf")
    s.add_argument("--out", required=True, help="CSV path")
    s.add_argument("--config-out", help="optional JSON echo of the effective config")
    s.set_defaults(func=cmd_sweep_noise)

    s = sub.add_parser("sweep-layers", help="AC against number of layers")
    common(s)
    s.add_argument("--layers", type=_int_list, default=[1, 2, 3, 4, 5, 6, 7, 8])
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--trials", type=int)
    s.add_argument("--method", choices=["dscf", "cascade"], default="dscf")
    s.add_argument("--out", required=True, help="CSV path")
    s.set_defaults(func=cmd_sweep_layers)

    s = sub.add_parser("grid", help="grid search over alpha, beta, gamma")
    common(s)
    powers = [10.0**e for e in range(-4, 5, 2)]
    s.add_argument("--alpha", type=_float_list, default=powers)
    s.add_argument("--beta", type=_float_list, default=powers)
    s.add_argument("--gamma", type=_float_list, default=powers)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--trials", type=int)
    s.add_argument("--out", required=True, help="output path prefix")
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("export-weights", help="heatmap of the coefficient matrix R or of S")
    s.add_argument("--model", required=True, help="model.npz written by train")
    s.add_argument("--which", choices=["R", "S"], default="R")
    s.add_argument("--format", choices=["pgm", "csv"], default="pgm")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_export_weights)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return 1
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except (OSError, ValueError, ArithmeticError, np.linalg.LinAlgError, KeyError) as err:
        print(f"dscfnet {args.command}: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
