"""Command-line entry point: ``exrot <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .bandwidth import h_exrot_1d, h_exrot_deriv_1d, h_rot_1d
from .kde import DEFAULT_GRID_POINTS, default_grid, kde_1d, write_estimate_csv
from .mixtures import catalogue_json, marron_wand, mixture_sample
from .roughness import constants_table
from .stats import cumulants_1d

OUTPUT_ENV = "EXROT_OUTPUT_DIR"


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _sample(args):
    truth = marron_wand(args.density)
    seq = bench.trial_seed(args.seed, args.density, args.n, args.trial)
    return truth, mixture_sample(truth, args.n, seq)


def _bandwidth(rule: str, x, n: int):
    c = cumulants_1d(x)
    if rule == "rot":
        return h_rot_1d(c.sigma, n)
    if rule == "exrot":
        return h_exrot_1d(c, n)
    return h_exrot_deriv_1d(c, n)


def _output_dir(flag: str | None, cfg_path: str | None) -> Path:
    env = os.environ.get(OUTPUT_ENV)
    return Path(env or flag or cfg_path or "results")


def cmd_catalogue(args) -> int:
    print(catalogue_json())
    return 0


def cmd_bandwidth(args) -> int:
    _, x = _sample(args)
    print(json.dumps(_bandwidth(args.rule, x, args.n).to_dict(), indent=2))
    return 0


def cmd_estimate(args) -> int:
    _, x = _sample(args)
    res = _bandwidth(args.rule, x, args.n)
    est = kde_1d(x, res.h, default_grid(x, res.h, args.grid_points))
    write_estimate_csv(est, args.out or sys.stdout)
    return 0


def _config(args, defaults: dict) -> bench.ExperimentConfig:
    data = dict(defaults)
    if args.config:
        data.update(json.loads(Path(args.config).read_text()))
    flags = {
        "density_ids": args.densities,
        "n_samples": args.sizes,
        "n_trials": args.trials,
        "seed": args.seed,
        "grid_points": args.grid_points,
        "workers": args.workers,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.timing:
        data["timing"] = True
    return bench.ExperimentConfig.from_dict(data)


def _run(args, defaults: dict, runner, prefix: str) -> int:
    cfg = _config(args, defaults)
    out = _output_dir(args.out, cfg.output_path)
    cfg = replace(cfg, output_path=str(out))
    rows = runner(cfg)
    paths = bench.emit_report(rows, out, formats=args.format, prefix=prefix)
    for agg in bench.aggregate(rows):
        print(f"density {agg.density_id:2d}  n={agg.n:6d}  {agg.rule:5s}  "
              f"h={agg.mean_h:.4f}  imse={agg.mean_imse:.4e}")
    for name, path in paths.items():
        print(f"wrote {name}: {path}", file=sys.stderr)
    return 0


def cmd_cross_density(args) -> int:
    defaults = {"n_samples": (10000,), "n_trials": 20}
    if args.full:
        defaults = {"n_samples": (50000,), "n_trials": 100}
    return _run(args, defaults, bench.run_cross_density, "cross_density")


def cmd_size_sweep(args) -> int:
    defaults = {"density_ids": (1, 2, 3, 4, 5), "n_samples": bench.SIZE_SWEEP_N,
                "n_trials": 20}
    return _run(args, defaults, bench.run_size_sweep, "size_sweep")


def cmd_constants(args) -> int:
    text = json.dumps(constants_table(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _add_bench_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--densities", type=_ints, help="comma-separated ids, e.g. 1,2,5")
    p.add_argument("--sizes", type=_ints, help="comma-separated sample sizes")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true",
                   help="fill elapsed_seconds (makes output run-dependent)")
    p.add_argument("--format", nargs="+", choices=("csv", "json"), default=["csv"])
    p.add_argument("--out", help=f"output directory (overridden by ${OUTPUT_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exrot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalogue", help="dump the 15 benchmark densities as JSON"
                   ).set_defaults(func=cmd_catalogue)

    def sampled(name, helptext, func):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--density", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--rule", choices=("rot", "exrot", "exrot-deriv"), default="exrot")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trial", type=int, default=0)
        p.set_defaults(func=func)
        return p

    sampled("bandwidth", "bandwidth for one seeded sample", cmd_bandwidth)
    est = sampled("estimate", "KDE curve for one seeded sample as CSV", cmd_estimate)
    est.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    est.add_argument("--out")

    p = sub.add_parser("cross-density", help="rules compared across densities")
    _add_bench_flags(p)
    p.add_argument("--full", action="store_true", help="n=50000 with 100 trials")
    p.set_defaults(func=cmd_cross_density)

    p = sub.add_parser("size-sweep", help="rules compared across sample sizes")
    _add_bench_flags(p)
    p.set_defaults(func=cmd_size_sweep)

    p = sub.add_parser("constants", help="dump the quadrature-checked coefficient table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
