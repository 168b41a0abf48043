"""Polynomial-time solver: reduce the allocation problem to max-weight
bipartite matching between MSs and subchannels.

The weight of edge (j, n) is the utility MS j would collect if it got
subchannel n interference free: W(j, n) = phi(tau + ln(1 + eta(a, j, n)))
with a the serving cell and phi the shifted alpha-fair utility.  Subtracting
the unserved utility u0 = phi(tau) makes every edge weight nonnegative, so a
maximum matching never hurts itself by matching more edges.  The matching is
provably optimal for the full problem whenever the crosstalk-dominance
certificate that applies to the given alpha holds on every (cell, MS,
subchannel) triple; `check_conditions` evaluates those certificates:

    condition1 (0 < alpha < 2, alpha != 1): tau < alpha and
        beta >= max((alpha-1) / (tau - tau^alpha (tau+r)^(1-alpha)),
                    alpha/tau + 1/eta)                 with r = ln(1+eta)
    condition2 (alpha >= 2): alpha (2^(alpha-1) - 1) / (tau (alpha-1)) > 1,
        r <= tau, and beta >= max(the same first term,
                                  that growth ratio + 1/eta)
    condition3 (alpha = 1): tau < 1 and
        beta >= max(1/eta + 1/tau, 1 / (tau ln(1 + r/tau)))

beta is the smallest crosstalk-to-serving gain ratio (model.beta).  The
all-crosstalk-infinite idealization is reported as a note: there the
reduction is exact for every alpha >= 0, including alpha = 0, which none of
the three finite certificates covers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GainDomainError, NoInterfererError, WeightDomainError
from .model import (Allocation, Params, Scenario, beta, eta,
                    fairness_utility_term)
from .report import SolverReport, make_report

__all__ = [
    "WeightedBipartiteGraph",
    "ConditionEntry",
    "ConditionReport",
    "unserved_utility",
    "build_weights",
    "max_weight_matching",
    "matching_to_allocation",
    "cond1_beta_threshold",
    "cond2_growth",
    "cond2_beta_threshold",
    "cond3_beta_threshold",
    "applicable_condition",
    "check_conditions",
    "solve_via_matching",
]


@dataclass(frozen=True, eq=False)
class WeightedBipartiteGraph:
    """Complete bipartite weight matrix, left = MSs, right = subchannels."""

    num_left: int
    num_right: int
    weight: np.ndarray

    def __post_init__(self):
        w = np.array(self.weight, dtype=float)
        if w.shape != (self.num_left, self.num_right):
            raise ValueError(f"weight matrix must be "
                             f"{(self.num_left, self.num_right)}, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weight", w)


def unserved_utility(p: Params) -> float:
    """Utility u0 of an MS with zero throughput."""
    return fairness_utility_term(0.0, p)


def build_weights(scn: Scenario, p: Params) -> np.ndarray:
    """(M, N) matrix of interference-free edge utilities W(j, n)."""
    w = np.empty((scn.num_ms, scn.num_subchannels))
    for j in range(scn.num_ms):
        a = int(scn.association[j])
        for n in range(scn.num_subchannels):
            h = float(scn.gains[a, j, n])
            if h <= 0.0 or math.isinf(h):
                raise WeightDomainError(
                    f"serving gain for (ms={j}, n={n}) must be positive and "
                    f"finite, got {h}")
            w[j, n] = fairness_utility_term(math.log1p(eta(scn, p, a, j, n)), p)
    return w


def _assign_min_cost(cost: list) -> list:
    """Minimum-cost assignment of n rows to distinct columns, n <= m.

    Potentials-and-slacks shortest augmenting path form, cubic overall.
    Returns the matched column of each row.
    """
    n, m = len(cost), len(cost[0])
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    match = [0] * (m + 1)          # match[j]: 1-based row on column j
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = inf
            j1 = 0
            row = cost[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    col_of_row = [-1] * n
    for j in range(1, m + 1):
        if match[j]:
            col_of_row[match[j] - 1] = j - 1
    return col_of_row


def max_weight_matching(g: WeightedBipartiteGraph,
                        baseline: float = 0.0) -> frozenset:
    """Matching maximizing the sum of (weight - baseline) over matched edges.

    Maximizes over all matchings, not just perfect ones: edges whose shifted
    weight is not positive are never part of the result, so with negative
    entries the empty matching can win, exactly as a brute-force scan over
    every matching would conclude.
    """
    shifted = g.weight - baseline
    transposed = g.num_left > g.num_right
    s = shifted.T if transposed else shifted
    clamped = np.maximum(s, 0.0)
    col_of_row = _assign_min_cost((-clamped).tolist())
    pairs = set()
    for i, c in enumerate(col_of_row):
        if c >= 0 and s[i, c] > 0.0:
            pairs.add((c, i) if transposed else (i, c))
    return frozenset(pairs)


def matching_to_allocation(scn: Scenario, matching) -> Allocation:
    """Turn matched (ms, subchannel) pairs into serving-cell triples."""
    return Allocation.of((int(scn.association[j]), j, n) for j, n in matching)


def _term1(alpha: float, tau: float, eta_val: float) -> float:
    r = math.log1p(eta_val)
    denom = tau - tau ** alpha * (tau + r) ** (1.0 - alpha)
    if denom == 0.0:
        return math.inf
    return (alpha - 1.0) / denom


def cond1_beta_threshold(alpha: float, tau: float, eta_val: float) -> float:
    if alpha == 1.0:
        return math.nan
    return max(_term1(alpha, tau, eta_val), alpha / tau + 1.0 / eta_val)


def cond2_growth(alpha: float, tau: float) -> float:
    if alpha == 1.0:
        return math.nan
    return alpha * (2.0 ** (alpha - 1.0) - 1.0) / (tau * (alpha - 1.0))


def cond2_beta_threshold(alpha: float, tau: float, eta_val: float) -> float:
    if alpha == 1.0:
        return math.nan
    return max(_term1(alpha, tau, eta_val),
               cond2_growth(alpha, tau) + 1.0 / eta_val)


def cond3_beta_threshold(tau: float, eta_val: float) -> float:
    r = math.log1p(eta_val)
    return max(1.0 / eta_val + 1.0 / tau,
               1.0 / (tau * math.log1p(r / tau)))


def applicable_condition(alpha: float) -> str:
    """Which certificate, if any, can certify optimality at this alpha."""
    if alpha == 1.0:
        return "condition3"
    if 0.0 < alpha < 2.0:
        return "condition1"
    if alpha >= 2.0:
        return "condition2"
    return "none"


@dataclass(frozen=True)
class ConditionEntry:
    bs: int
    ms: int
    subchannel: int
    eta: float
    beta: float
    threshold_c1: float
    threshold_c2: float
    threshold_c3: float


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple
    cond1_holds: bool
    cond2_holds: bool
    cond3_holds: bool
    cond4_holds: bool
    cond4_note: str
    applicable: str
    applicable_holds: bool


def check_conditions(scn: Scenario, p: Params) -> ConditionReport:
    """Evaluate every certificate on every (serving cell, MS, subchannel)
    triple.  Needs at least two cells and positive finite serving gains."""
    if scn.num_bs < 2:
        raise NoInterfererError("certificates need at least two cells")
    entries = []
    all_cross_infinite = True
    for j in range(scn.num_ms):
        a = int(scn.association[j])
        for n in range(scn.num_subchannels):
            h = float(scn.gains[a, j, n])
            if h <= 0.0 or math.isinf(h):
                raise GainDomainError(
                    f"serving gain for (ms={j}, n={n}) must be positive and "
                    f"finite, got {h}")
            e = eta(scn, p, a, j, n)
            b = beta(scn, a, j, n)
            if not math.isinf(b):
                all_cross_infinite = False
            entries.append(ConditionEntry(
                bs=a, ms=j, subchannel=n, eta=e, beta=b,
                threshold_c1=cond1_beta_threshold(p.alpha, p.tau, e),
                threshold_c2=cond2_beta_threshold(p.alpha, p.tau, e),
                threshold_c3=cond3_beta_threshold(p.tau, e)))

    cond1 = (p.tau < p.alpha
             and all(x.beta >= x.threshold_c1 for x in entries))
    growth = cond2_growth(p.alpha, p.tau)
    cond2 = (growth > 1.0
             and all(math.log1p(x.eta) <= p.tau for x in entries)
             and all(x.beta >= x.threshold_c2 for x in entries))
    cond3 = (p.tau < 1.0
             and all(x.beta >= x.threshold_c3 for x in entries))
    if all_cross_infinite:
        note = ("every crosstalk gain is infinite: the matching reduction "
                "is exact for any alpha >= 0")
    else:
        note = ("finite crosstalk present: optimality certificates rely on "
                "conditions 1-3")

    applicable = applicable_condition(p.alpha)
    holds = {"condition1": cond1, "condition2": cond2,
             "condition3": cond3}.get(applicable, False)
    return ConditionReport(entries=tuple(entries),
                           cond1_holds=cond1, cond2_holds=cond2,
                           cond3_holds=cond3,
                           cond4_holds=all_cross_infinite, cond4_note=note,
                           applicable=applicable, applicable_holds=holds)


def solve_via_matching(scn: Scenario, p: Params) -> SolverReport:
    """Weights, Hungarian matching, allocation; certified when the
    applicable crosstalk condition holds on the whole scenario."""
    weights = build_weights(scn, p)
    graph = WeightedBipartiteGraph(scn.num_ms, scn.num_subchannels, weights)
    matching = max_weight_matching(graph, baseline=unserved_utility(p))
    alloc = matching_to_allocation(scn, matching)
    if scn.num_bs < 2:
        certified, certificate = False, "none"
    else:
        cert = check_conditions(scn, p)
        certified = cert.applicable_holds
        certificate = cert.applicable if certified else "none"
    return make_report(alloc, scn, p, method="matching",
                       certified=certified, certificate=certificate)
