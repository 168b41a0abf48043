"""Seeded parameter sweeps over alpha, tau, or the distributed threshold p0.

A sweep runs method x grid x seeds, records one row per run (errors are
recorded in the row's status, never abort the sweep), and aggregates
mean/stderr per grid value over the successful rows.  The same seed list
(base seed + run index) is reused at every grid value so comparisons along
the grid are paired.  Identical specs produce byte-identical CSV files.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .distributed import default_p0, solve_distributed
from .errors import IcicError
from .exact import SearchBudget, exhaustive_search
from .generate import ScenarioConfig, generate
from .matching import solve_via_matching
from .model import Params

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "aggregate", "emit_outputs",
           "plot_sweep", "RAW_HEADER", "AGG_HEADER"]

RAW_HEADER = ["swept_var", "value", "seed", "throughput", "fi", "utility",
              "served", "method", "status"]
AGG_HEADER = ["swept_var", "value", "n",
              "throughput_mean", "throughput_stderr",
              "fi_mean", "fi_stderr",
              "utility_mean", "utility_stderr",
              "served_mean", "served_stderr"]

_METHODS = ("exhaustive", "matching", "distributed")
_VARS = ("alpha", "tau", "p0")


@dataclass(frozen=True)
class SweepSpec:
    config: ScenarioConfig
    method: str
    var: str
    grid: tuple
    num_seeds: int = 50
    alpha: float = 0.0
    tau: float = 8.5
    power: float = 1.0
    noise: float = 1.0
    p0: float | None = None
    max_states: int = 10 ** 8

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.var not in _VARS:
            raise ValueError(f"swept variable must be one of {_VARS}")
        if self.var == "p0" and self.method != "distributed":
            raise ValueError("only the distributed method takes p0")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        if self.num_seeds < 1:
            raise ValueError("num_seeds must be positive")


@dataclass(frozen=True)
class SweepRow:
    swept_var: str
    value: float
    seed: int
    throughput: float
    fi: float
    utility: float
    served: int
    method: str
    status: str


def _solve_one(scn, spec: SweepSpec, value: float):
    alpha = value if spec.var == "alpha" else spec.alpha
    tau = value if spec.var == "tau" else spec.tau
    p = Params(alpha=alpha, tau=tau, power=spec.power, noise=spec.noise)
    if spec.method == "exhaustive":
        return exhaustive_search(scn, p, SearchBudget(spec.max_states))
    if spec.method == "matching":
        return solve_via_matching(scn, p)
    if spec.var == "p0":
        p0 = value
    elif spec.p0 is not None:
        p0 = spec.p0
    else:
        p0 = default_p0(scn.num_bs, scn.num_ms, scn.num_subchannels, alpha)
    return solve_distributed(scn, p, p0)[0]


def run_sweep(spec: SweepSpec) -> list:
    seeds = [spec.config.seed + i for i in range(spec.num_seeds)]
    scenarios = [generate(replace(spec.config, seed=s)) for s in seeds]
    rows = []
    for value in spec.grid:
        for seed, scn in zip(seeds, scenarios):
            try:
                rep = _solve_one(scn, spec, value)
                rows.append(SweepRow(spec.var, value, seed,
                                     rep.total_throughput, rep.fairness_index,
                                     rep.utility, rep.served, spec.method, "ok"))
            except (IcicError, ValueError, RuntimeError) as err:
                rows.append(SweepRow(spec.var, value, seed,
                                     math.nan, math.nan, math.nan, 0,
                                     spec.method, type(err).__name__))
    return rows


def _mean_stderr(xs: list) -> tuple:
    n = len(xs)
    mean = sum(xs) / n
    if n < 2:
        return mean, 0.0
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var / n)


def aggregate(rows: list) -> list:
    """Per grid value (in first-seen order): n plus mean/stderr of each
    metric over the rows whose status is ok."""
    order = []
    groups = {}
    for r in rows:
        if r.value not in groups:
            order.append(r.value)
            groups[r.value] = []
        if r.status == "ok":
            groups[r.value].append(r)
    out = []
    for value in order:
        ok = groups[value]
        if not ok:
            out.append([rows[0].swept_var, value, 0] + [math.nan] * 8)
            continue
        cells = [rows[0].swept_var, value, len(ok)]
        for metric in ("throughput", "fi", "utility", "served"):
            mean, se = _mean_stderr([float(getattr(r, metric)) for r in ok])
            cells.extend([mean, se])
        out.append(cells)
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_outputs(rows: list, path) -> tuple:
    """Write the raw table to `path` and the aggregate next to it
    (suffix _agg.csv); returns both paths."""
    raw_path = Path(path)
    agg_path = raw_path.with_name(raw_path.stem + "_agg.csv")
    with open(raw_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_HEADER)
        for r in rows:
            w.writerow([r.swept_var, _fmt(r.value), r.seed, _fmt(r.throughput),
                        _fmt(r.fi), _fmt(r.utility), r.served, r.method,
                        r.status])
    with open(agg_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGG_HEADER)
        for cells in aggregate(rows):
            w.writerow([_fmt(c) for c in cells])
    return raw_path, agg_path


def plot_sweep(agg_path, out_path) -> None:
    """Render throughput (left axis) and fairness (right axis) against the
    swept variable, from the aggregate CSV alone.  SVG output is
    deterministic so re-renders byte-match."""
    try:
        import matplotlib
    except ImportError as err:
        raise RuntimeError("plotting needs the optional matplotlib "
                           "dependency (pip install icicfair[plots])") from err
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "icicfair"
    import matplotlib.pyplot as plt

    with open(agg_path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [row for row in reader]
    xs = [float(r["value"]) for r in rows]
    thr = [float(r["throughput_mean"]) for r in rows]
    thr_se = [float(r["throughput_stderr"]) for r in rows]
    fi = [float(r["fi_mean"]) for r in rows]
    fi_se = [float(r["fi_stderr"]) for r in rows]
    var = rows[0]["swept_var"] if rows else "value"

    fig, ax1 = plt.subplots(figsize=(6.0, 4.0))
    ax1.errorbar(xs, thr, yerr=thr_se, color="tab:blue", marker="o",
                 capsize=3, label="total throughput")
    ax1.set_xlabel(var)
    ax1.set_ylabel("mean total throughput (nats)", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.errorbar(xs, fi, yerr=fi_se, color="tab:red", marker="s",
                 capsize=3, label="fairness index")
    ax2.set_ylabel("mean fairness index", color="tab:red")
    ax2.set_ylim(0.0, 1.05)
    fig.tight_layout()
    if str(out_path).endswith(".svg"):
        fig.savefig(out_path, metadata={"Date": None})
    else:
        fig.savefig(out_path)
    plt.close(fig)
