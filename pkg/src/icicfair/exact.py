"""Exhaustive search over every feasible allocation.

The feasible set factorizes per subchannel: on each subchannel every cell
independently picks one of its own MSs or stays silent, so a full allocation
is N digits over the "column" alphabet of per-cell choices (the same alphabet
for every subchannel).  The search tabulates per-column throughput
contributions once per subchannel and then scans the digit space in numpy
chunks; the state count is the product over (cell, subchannel) pairs of
(|M_a| + 1) and is checked against the budget before any work happens.

The reduction is enumeration-order independent: maximum utility first, and
among exact floating-point ties the lexicographically smallest sorted triple
set wins.  Exponential; meant for instances small enough to certify the
polynomial solvers against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLargeError
from .model import Allocation, Params, Scenario, sinr_rate
from .report import SolverReport, make_report

__all__ = ["SearchBudget", "state_count", "exhaustive_search"]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 10 ** 8

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be positive")


def state_count(scn: Scenario) -> int:
    per_cell = 1
    for a in range(scn.num_bs):
        per_cell *= len(scn.members(a)) + 1
    return per_cell ** scn.num_subchannels


def _column_rates(col, members, gains, n, p: Params) -> list:
    """Per-MS rates for one column: col[a] == 0 means cell a is silent,
    col[a] == i means cell a serves its i-th MS on subchannel n."""
    tx = [(a, members[a][c - 1]) for a, c in enumerate(col) if c]
    out = []
    for a, j in tx:
        interference = sum(float(gains[b, j, n]) for b, _ in tx if b != a)
        out.append((j, sinr_rate(float(gains[a, j, n]), interference,
                                 p.power, p.noise)))
    return out


def _chunk_utilities(u_matrix: np.ndarray, p: Params) -> np.ndarray:
    if p.alpha == 0.0:
        return u_matrix.shape[1] * p.tau + u_matrix.sum(axis=1)
    shifted = p.tau + u_matrix
    if p.alpha == 1.0:
        return np.log(shifted).sum(axis=1)
    return np.power(shifted, 1.0 - p.alpha).sum(axis=1) / (1.0 - p.alpha)


def _col_triples(col, members, n) -> list:
    return [(a, members[a][c - 1], n) for a, c in enumerate(col) if c]


def exhaustive_search(scn: Scenario, p: Params,
                      budget: SearchBudget | None = None) -> SolverReport:
    """Globally optimal allocation for the given utility, by enumeration.

    Raises InstanceTooLargeError (naming the state count) when the instance
    exceeds budget.max_states.
    """
    budget = budget or SearchBudget()
    count = state_count(scn)
    if count > budget.max_states:
        raise InstanceTooLargeError(
            f"state space has {count} states, over the budget of "
            f"{budget.max_states}")

    members = [scn.members(a) for a in range(scn.num_bs)]
    base = [len(mem) + 1 for mem in members]
    n_sub = scn.num_subchannels
    m = scn.num_ms

    best_val = -np.inf
    best_key: tuple | None = None

    if n_sub == 1:
        # stream the columns directly, never materializing the alphabet
        col_iter = enumerate(itertools.product(*(range(b) for b in base)))
        while True:
            chunk = list(itertools.islice(col_iter, _CHUNK))
            if not chunk:
                break
            u = np.zeros((len(chunk), m))
            for row, (_, col) in enumerate(chunk):
                for j, rate in _column_rates(col, members, scn.gains, 0, p):
                    u[row, j] = rate
            vals = _chunk_utilities(u, p)
            chunk_max = float(vals.max())
            if chunk_max < best_val:
                continue
            if chunk_max > best_val:
                best_val = chunk_max
                best_key = None
            for row in np.flatnonzero(vals == chunk_max):
                key = tuple(sorted(_col_triples(chunk[row][1], members, 0)))
                if best_key is None or key < best_key:
                    best_key = key
    else:
        columns = list(itertools.product(*(range(b) for b in base)))
        n_cols = len(columns)
        rates = np.zeros((n_sub, n_cols, m))
        for c, col in enumerate(columns):
            for n in range(n_sub):
                for j, rate in _column_rates(col, members, scn.gains, n, p):
                    rates[n, c, j] = rate

        strides = [n_cols ** (n_sub - 1 - n) for n in range(n_sub)]
        for start in range(0, count, _CHUNK):
            states = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
            u = np.zeros((len(states), m))
            digit_arrays = []
            for n in range(n_sub):
                digits = (states // strides[n]) % n_cols
                digit_arrays.append(digits)
                u += rates[n, digits, :]
            vals = _chunk_utilities(u, p)
            chunk_max = float(vals.max())
            if chunk_max < best_val:
                continue
            if chunk_max > best_val:
                best_val = chunk_max
                best_key = None
            for row in np.flatnonzero(vals == chunk_max):
                triples = []
                for n in range(n_sub):
                    triples.extend(_col_triples(columns[digit_arrays[n][row]],
                                                members, n))
                key = tuple(sorted(triples))
                if best_key is None or key < best_key:
                    best_key = key

    alloc = Allocation.of(best_key or ())
    return make_report(alloc, scn, p, method="exhaustive",
                       certified=True, certificate="exhaustive")
