"""Numeric verification lab.

Two families of checks live here.

1. Sublevel checks for the certificate machinery.  The function

       f(x)  = x * (tau + ln(1 + eta / ((x-1) eta beta + 1)))^(1-alpha) / (1-alpha)
               - (x-1) * tau^(1-alpha) / (1-alpha)          (alpha != 1)
       f1(x) = x * ln(tau + ln(1 + eta / ((x-1) eta beta + 1)))
               - (x-1) * ln(tau)                            (alpha == 1)

   is the utility of splitting one subchannel across x mutually interfering
   cells, relative to serving x-1 MSs nothing.  The certificates of the
   matching solver are exactly the parameter regimes in which x = 1 is the
   best choice, i.e. f(x) <= f(1) for every x >= 1.  verify_sublevel checks
   that numerically on a log-spaced grid plus the analytic x -> inf limit:

       lim f  = tau^(-alpha) (1 + beta tau - alpha) / (beta (1 - alpha))
       lim f1 = 1 / (beta tau) + ln(tau)

2. The independent-set reduction.  recover_mis_size inverts the utility of
   an optimal gadget allocation into the independent set size it encodes,
   and brute_force_mis provides the ground truth for small graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistencyError
from .matching import (cond1_beta_threshold, cond2_beta_threshold,
                       cond2_growth, cond3_beta_threshold)
from .model import Params, fairness_utility_term
from .report import SolverReport

__all__ = [
    "f_eval",
    "f1_eval",
    "f_limit",
    "f1_limit",
    "LemmaCheckConfig",
    "SublevelReport",
    "scalar_condition_holds",
    "verify_sublevel",
    "PRESET_ROWS",
    "preset_configs",
    "recover_mis_size",
    "brute_force_mis",
]

_LN3 = math.log(3.0)


def _check_domain(x, alpha, tau, eta, beta, need_alpha_ne_1):
    if np.any(np.asarray(x) < 1.0):
        raise ValueError("x must be >= 1")
    if need_alpha_ne_1 and alpha == 1.0:
        raise ValueError("alpha == 1 has its own log form, use f1_eval")
    if tau <= 0.0 or eta <= 0.0 or beta <= 0.0:
        raise ValueError("tau, eta, beta must be positive")


def f_eval(x, alpha: float, tau: float, eta: float, beta: float):
    """Vectorized in x; accepts scalars or numpy arrays."""
    _check_domain(x, alpha, tau, eta, beta, need_alpha_ne_1=True)
    x = np.asarray(x, dtype=float)
    inner = tau + np.log1p(eta / ((x - 1.0) * eta * beta + 1.0))
    one = 1.0 - alpha
    return x * inner ** one / one - (x - 1.0) * tau ** one / one


def f1_eval(x, tau: float, eta: float, beta: float):
    _check_domain(x, 1.0, tau, eta, beta, need_alpha_ne_1=False)
    x = np.asarray(x, dtype=float)
    inner = tau + np.log1p(eta / ((x - 1.0) * eta * beta + 1.0))
    return x * np.log(inner) - (x - 1.0) * math.log(tau)


def f_limit(alpha: float, tau: float, beta: float) -> float:
    """Value that f approaches as x -> inf."""
    return tau ** (-alpha) * (1.0 + beta * tau - alpha) / (beta * (1.0 - alpha))


def f1_limit(tau: float, beta: float) -> float:
    return 1.0 / (beta * tau) + math.log(tau)


@dataclass(frozen=True)
class LemmaCheckConfig:
    alpha: float
    tau: float
    eta: float
    beta: float
    x_max: float = 1e4
    grid_points: int = 100_000
    slack: float = 1e-12


@dataclass(frozen=True)
class SublevelReport:
    applicable: bool
    condition: str
    holds: bool
    worst_x: float
    worst_gap: float


def scalar_condition_holds(alpha: float, tau: float, eta: float,
                           beta: float) -> tuple:
    """(condition name, prerequisites hold) for a single parameter point."""
    if alpha == 1.0:
        return "condition3", (tau < 1.0 and beta >= cond3_beta_threshold(tau, eta))
    if 0.0 < alpha < 2.0:
        return "condition1", (tau < alpha
                              and beta >= cond1_beta_threshold(alpha, tau, eta))
    if alpha >= 2.0:
        ok = (cond2_growth(alpha, tau) > 1.0
              and math.log1p(eta) <= tau
              and beta >= cond2_beta_threshold(alpha, tau, eta))
        return "condition2", ok
    return "none", False


def verify_sublevel(cfg: LemmaCheckConfig) -> SublevelReport:
    """Check that x = 1 maximizes f (or f1) over [1, x_max] and in the limit.

    Only meaningful when the certificate that applies to cfg.alpha holds for
    (tau, eta, beta); otherwise the report comes back not applicable and no
    grid is evaluated.
    """
    condition, ok = scalar_condition_holds(cfg.alpha, cfg.tau, cfg.eta, cfg.beta)
    if not ok:
        return SublevelReport(applicable=False, condition=condition,
                              holds=False, worst_x=math.nan,
                              worst_gap=math.nan)

    grid = np.geomspace(1.0, cfg.x_max, int(cfg.grid_points))
    if cfg.alpha == 1.0:
        values = f1_eval(grid, cfg.tau, cfg.eta, cfg.beta)
        tail = f1_limit(cfg.tau, cfg.beta)
    else:
        values = f_eval(grid, cfg.alpha, cfg.tau, cfg.eta, cfg.beta)
        tail = f_limit(cfg.alpha, cfg.tau, cfg.beta)

    base = float(values[0])
    gaps = values - base
    worst = int(np.argmax(gaps))
    worst_x, worst_gap = float(grid[worst]), float(gaps[worst])
    if tail - base > worst_gap:
        worst_x, worst_gap = math.inf, tail - base
    return SublevelReport(applicable=True, condition=condition,
                          holds=worst_gap <= cfg.slack,
                          worst_x=worst_x, worst_gap=worst_gap)


@dataclass(frozen=True)
class PresetRow:
    """One known-good parameter regime: alpha samples, eta samples, a tau
    rule (either absolute values or offsets k with tau = base(eta) + k or
    tau = alpha - k), and the smallest certified beta."""

    alphas: tuple
    etas: tuple
    tau_mode: str          # "absolute" | "alpha-minus-k" | "rate-plus-k"
    tau_values: tuple
    beta_min: float


PRESET_ROWS = (
    PresetRow((1.0,), (100.0, 550.0, 1000.0),
              "absolute", (0.99, 0.995, 0.9999), 1.021),
    PresetRow((0.01, 1.005, 1.999), (100.0, 550.0, 1000.0),
              "alpha-minus-k", (1e-4, 5.5e-4, 1e-3), 1.13),
    PresetRow((2.7, 2.8, 2.9), (30.0, 31.5, 33.0),
              "rate-plus-k", (1e-2, 5.5e-2, 1e-1), 1.25),
    PresetRow((3.5, 3.6, 3.7), (500.5, 550.0, 599.5),
              "rate-plus-k", (1e-3, 5.5e-3, 1e-2), 1.22),
    PresetRow((4.4, 4.5, 4.6), (790.0, 845.0, 900.0),
              "rate-plus-k", (5.0, 5.25, 5.5), 1.22),
    PresetRow((5.3, 5.4, 5.5), (810.0, 855.0, 900.0),
              "rate-plus-k", (15.0, 15.5, 16.0), 1.22),
)


def preset_configs(row: PresetRow, **overrides) -> list:
    """Expand a preset row into concrete LemmaCheckConfigs (full product of
    the sampled alpha, eta, and tau values)."""
    out = []
    for alpha in row.alphas:
        for eta in row.etas:
            for t in row.tau_values:
                if row.tau_mode == "absolute":
                    tau = t
                elif row.tau_mode == "alpha-minus-k":
                    tau = alpha - t
                elif row.tau_mode == "rate-plus-k":
                    tau = math.log1p(eta) + t
                else:
                    raise ValueError(f"unknown tau_mode {row.tau_mode}")
                out.append(LemmaCheckConfig(alpha=alpha, tau=tau, eta=eta,
                                            beta=row.beta_min, **overrides))
    return out


def recover_mis_size(report: SolverReport, graph_order: int,
                     p: Params) -> int:
    """Invert an optimal gadget utility into the independent set size.

    With k winning vertices the optimum is k * phi(tau + ln 3) plus
    (|V| - k) * phi(tau), so k is a ratio of utility differences; it must
    land on an integer to within 1e-6 or the report is inconsistent with a
    gadget optimum.
    """
    g = fairness_utility_term(_LN3, p)
    u0 = fairness_utility_term(0.0, p)
    k = (report.utility - graph_order * u0) / (g - u0)
    rounded = round(k)
    if abs(k - rounded) > 1e-6:
        raise InconsistencyError(
            f"utility {report.utility!r} does not decode to an integer "
            f"set size (got {k!r})")
    if not (0 <= rounded <= graph_order):
        raise InconsistencyError(f"decoded set size {rounded} out of range")
    return int(rounded)


def brute_force_mis(num_vertices: int, edges) -> int:
    """Maximum independent set size by bitmask enumeration (small graphs)."""
    if num_vertices < 0:
        raise ValueError("vertex count must be nonnegative")
    adj = [0] * num_vertices
    for u, w in edges:
        if not (0 <= u < num_vertices and 0 <= w < num_vertices) or u == w:
            raise ValueError(f"bad edge ({u}, {w})")
        adj[u] |= 1 << w
        adj[w] |= 1 << u
    best = 0
    for mask in range(1 << num_vertices):
        size = 0
        ok = True
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            if adj[v] & mask:
                ok = False
                break
            size += 1
            m &= m - 1
        if ok and size > best:
            best = size
    return best
