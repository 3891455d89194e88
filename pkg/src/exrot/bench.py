"""Monte-Carlo comparison of bandwidth rules on the Marron-Wand densities."""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from .bandwidth import h_exrot_1d, h_rot_1d
from .kde import DensityEstimate, kde_1d
from .mixtures import NormalMixture, marron_wand, mixture_pdf, mixture_sample
from .stats import cumulants_1d

RULES = ("rot", "exrot")
TAIL_TOL = 1e-6
ROW_FIELDS = ("density_id", "n", "trial", "rule", "h", "imse", "elapsed_seconds")
SIZE_SWEEP_N = (100, 200, 500, 1000, 2000, 5000, 10000, 20000)


@dataclass(frozen=True)
class ExperimentConfig:
    density_ids: tuple[int, ...] = tuple(range(1, 16))
    n_samples: tuple[int, ...] = (10000,)
    n_trials: int = 20
    seed: int = 20240501
    rules: tuple[str, ...] = RULES
    grid_points: int = 4096
    output_path: str | None = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        for name in ("density_ids", "n_samples", "rules"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.density_ids or any(d not in range(1, 16) for d in self.density_ids):
            raise ValueError("density_ids must be a non-empty subset of 1..15")
        if not self.n_samples or any(n < 4 for n in self.n_samples):
            raise ValueError("every sample size must be >= 4")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.grid_points < 256:
            raise ValueError("grid_points must be >= 256")
        if not self.rules or any(r not in RULES for r in self.rules):
            raise ValueError(f"rules must be a non-empty subset of {RULES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class TrialRow:
    density_id: int
    n: int
    trial: int
    rule: str
    h: float
    imse: float
    elapsed_seconds: float | None = None

    def sort_key(self):
        return (self.density_id, self.n, self.trial, self.rule)


def trial_seed(seed: int, density_id: int, n: int, trial: int) -> np.random.SeedSequence:
    """Seed for one draw; independent of execution order and worker count."""
    return np.random.SeedSequence([seed, density_id, n, trial])


def tail_mass(truth: NormalMixture, lo: float, hi: float) -> float:
    """Probability mass of ``truth`` outside ``[lo, hi]``."""
    return float(sum(w * (ndtr((lo - mu) / s) + ndtr((mu - hi) / s))
                     for w, mu, s in truth.components))


def imse(est: DensityEstimate, truth: NormalMixture) -> float:
    """Trapezoid integral of ``(f_hat - f)^2`` over the estimate's grid.

    Raises if more than ``1e-6`` of the true mass lies outside the grid.
    """
    grid = np.asarray(est.grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("imse needs a 1-D grid with at least two points")
    tail = tail_mass(truth, grid[0], grid[-1])
    if tail > TAIL_TOL:
        raise ValueError(f"grid [{grid[0]:.4g}, {grid[-1]:.4g}] misses {tail:.3g} "
                         "of the true density mass")
    diff = est.values - mixture_pdf(truth, grid)
    return float(np.trapezoid(diff * diff, grid))


def benchmark_grid(samples: np.ndarray, h: float, truth: NormalMixture,
                   points: int) -> np.ndarray:
    """Sample range padded by 5h, widened to the truth's 7-scale support."""
    lo, hi = truth.support(width=7.0)
    return np.linspace(min(samples.min() - 5 * h, lo), max(samples.max() + 5 * h, hi), points)


def _bandwidth(rule: str, samples: np.ndarray, n: int) -> float:
    c = cumulants_1d(samples)
    if rule == "rot":
        return h_rot_1d(c.sigma, n).h
    return h_exrot_1d(c, n).h


def run_trial(cfg: ExperimentConfig, density_id: int, n: int, trial: int) -> list[TrialRow]:
    """One paired draw: every rule is evaluated on the same sample."""
    truth = marron_wand(density_id)
    samples = mixture_sample(truth, n, trial_seed(cfg.seed, density_id, n, trial))
    rows = []
    for rule in cfg.rules:
        t0 = time.perf_counter()
        h = _bandwidth(rule, samples, n)
        grid = benchmark_grid(samples, h, truth, cfg.grid_points)
        est = kde_1d(samples, h, grid)
        elapsed = time.perf_counter() - t0 if cfg.timing else None
        rows.append(TrialRow(density_id, n, trial, rule, float(h), imse(est, truth), elapsed))
    return rows


def _run_task(args) -> list[TrialRow]:
    return run_trial(*args)


def run_trials(cfg: ExperimentConfig) -> list[TrialRow]:
    tasks = [(cfg, d, n, t) for d in cfg.density_ids for n in cfg.n_samples
             for t in range(cfg.n_trials)]
    if cfg.workers == 1:
        chunks = map(_run_task, tasks)
        rows = [r for chunk in chunks for r in chunk]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = [r for chunk in pool.map(_run_task, tasks, chunksize=4) for r in chunk]
    return sorted(rows, key=TrialRow.sort_key)


def run_cross_density(cfg: ExperimentConfig) -> list[TrialRow]:
    """Both rules on every configured density at a fixed sample size."""
    if len(cfg.n_samples) != 1:
        raise ValueError("cross-density runs use exactly one sample size")
    return run_trials(cfg)


def run_size_sweep(cfg: ExperimentConfig) -> list[TrialRow]:
    """Both rules across several sample sizes."""
    if len(cfg.n_samples) < 2:
        raise ValueError("a size sweep needs at least two sample sizes")
    return run_trials(cfg)


# ------------------------------------------------------------------ reporting

@dataclass(frozen=True)
class AggregateRow:
    density_id: int
    n: int
    rule: str
    n_trials: int
    mean_h: float
    mean_imse: float
    mean_elapsed_seconds: float | None = None


def aggregate(rows) -> list[AggregateRow]:
    """Per-(density, n, rule) means over trials."""
    groups: dict[tuple, list[TrialRow]] = {}
    for r in rows:
        groups.setdefault((r.density_id, r.n, r.rule), []).append(r)
    out = []
    for (d, n, rule), rs in sorted(groups.items()):
        times = [r.elapsed_seconds for r in rs if r.elapsed_seconds is not None]
        out.append(AggregateRow(
            d, n, rule, len(rs),
            math.fsum(r.h for r in rs) / len(rs),
            math.fsum(r.imse for r in rs) / len(rs),
            math.fsum(times) / len(times) if len(times) == len(rs) else None,
        ))
    return out


def loglog_slope(agg, density_id: int, rule: str) -> float:
    """Least-squares slope of log(mean IMSE) against log(n)."""
    pts = [(a.n, a.mean_imse) for a in agg if a.density_id == density_id and a.rule == rule]
    if len(pts) < 2:
        raise ValueError("need at least two sample sizes to fit a slope")
    ln, li = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
    return float(np.polyfit(ln, li, 1)[0])


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, header, records) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for rec in records:
            w.writerow([_fmt(v) for v in rec])


def rows_to_csv(rows, path) -> None:
    _write_csv(Path(path), ROW_FIELDS,
               ([getattr(r, f) for f in ROW_FIELDS] for r in rows))


def emit_report(rows, out_dir, formats=("csv",), prefix: str = "trials") -> dict[str, Path]:
    """Write trial rows, per-group means and plot data; return the paths written.

    ``formats`` may contain ``csv`` and ``json``.  The plot-data file lists
    ``(log10 n, mean imse)`` per density and rule.
    """
    rows = sorted(rows, key=TrialRow.sort_key)
    if not rows:
        raise ValueError("no rows to report")
    bad = set(formats) - {"csv", "json"}
    if bad:
        raise ValueError(f"unsupported formats: {sorted(bad)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    agg = aggregate(rows)
    paths = {}
    if "csv" in formats:
        paths["trials_csv"] = out / f"{prefix}.csv"
        rows_to_csv(rows, paths["trials_csv"])
        paths["aggregate_csv"] = out / f"{prefix}_aggregate.csv"
        _write_csv(paths["aggregate_csv"], [f.name for f in fields(AggregateRow)],
                   ([getattr(a, f.name) for f in fields(AggregateRow)] for a in agg))
    if "json" in formats:
        paths["trials_json"] = out / f"{prefix}.json"
        paths["trials_json"].write_text(json.dumps([asdict(r) for r in rows], indent=1) + "\n")
        paths["aggregate_json"] = out / f"{prefix}_aggregate.json"
        paths["aggregate_json"].write_text(json.dumps([asdict(a) for a in agg], indent=1) + "\n")
    paths["plot_data"] = out / f"{prefix}_plot_data.csv"
    _write_csv(paths["plot_data"], ["density_id", "rule", "log10_n", "mean_imse"],
               ((a.density_id, a.rule, math.log10(a.n), a.mean_imse) for a in agg))
    return paths
