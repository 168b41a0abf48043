"""Synchronous distributed greedy allocation protocol.

Each round, every still-active BS computes its locally best candidate value
p_a: the highest estimated rate over its own unserved MSs and the
subchannels it has not used itself, where the estimate counts interference
only from neighboring cells and only as far as the local view of their
announcements goes.  A BS whose p_a beats every neighbor's conveyed value
allocates that candidate (ties allow simultaneous winners); announcements
merge into neighbors' local views at the end of the round.  A BS terminates
once all its MSs are served, all subchannels are used, its candidate set is
empty, or p_a falls below the threshold p0; a terminated BS conveys -inf
forever after (but keeps folding neighbors' announcements into its view).

The default threshold is p0 = 1 / (1/p0* + alpha) with
p0* = 1 + M / (2 N K) when M <= K N, else 1 + ln(N K) / (2 ln M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import Allocation, Params, Scenario, ms_throughput
from .report import SolverReport, make_report

__all__ = [
    "BsState",
    "AllocationEvent",
    "RoundRecord",
    "RoundTrace",
    "p0_star",
    "default_p0",
    "make_states",
    "compute_pa",
    "run_distributed",
    "solve_distributed",
    "dump_trace",
]


def p0_star(num_bs: int, num_ms: int, num_subchannels: int) -> float:
    """Serving threshold that empirically balances throughput against
    leaving room for late allocations."""
    k, m, n = num_bs, num_ms, num_subchannels
    if min(k, m, n) < 1:
        raise ValueError("sizes must be positive")
    if m <= k * n:
        return 1.0 + m / (2.0 * n * k)
    if m < 2:
        raise ValueError("m > k*n requires m >= 2")
    return 1.0 + math.log(n * k) / (2.0 * math.log(m))


def default_p0(num_bs: int, num_ms: int, num_subchannels: int,
               alpha: float) -> float:
    """Fairness-adjusted threshold: larger alpha lowers the bar so more MSs
    get served."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return 1.0 / (1.0 / p0_star(num_bs, num_ms, num_subchannels) + alpha)


@dataclass
class BsState:
    """Local state of one BS: its own allocation so far, its usage mask,
    and its view of each neighbor's usage mask (plus the implied
    interference totals, cached per own MS and subchannel)."""

    bs: int
    own_ms: np.ndarray
    served: np.ndarray
    used: np.ndarray
    neighbor_used: dict
    interference: np.ndarray
    assigned: list = field(default_factory=list)
    terminated: bool = False
    reason: str | None = None


def make_states(scn: Scenario) -> list:
    states = []
    for a in range(scn.num_bs):
        own = np.array(scn.members(a), dtype=np.int64)
        states.append(BsState(
            bs=a,
            own_ms=own,
            served=np.zeros(own.size, dtype=bool),
            used=np.zeros(scn.num_subchannels, dtype=bool),
            neighbor_used={b: np.zeros(scn.num_subchannels, dtype=bool)
                           for b in sorted(scn.neighbors[a])},
            interference=np.zeros((own.size, scn.num_subchannels)),
        ))
    return states


def compute_pa(state: BsState, scn: Scenario, p: Params) -> tuple:
    """Best candidate of one BS under its local view.

    Returns (value, (ms, subchannel)) or (-inf, None) when no unserved MS
    and unused subchannel remain.  Ties break to the lowest MS index, then
    the lowest subchannel.
    """
    if state.own_ms.size == 0:
        return -math.inf, None
    rows = ~state.served
    cols = ~state.used
    if not rows.any() or not cols.any():
        return -math.inf, None
    num = p.power * scn.gains[state.bs, state.own_ms, :]
    den = p.power * state.interference + p.noise
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(den), 0.0, num / den)
    rates = np.log1p(ratio)
    masked = np.where(rows[:, None] & cols[None, :], rates, -math.inf)
    flat = int(np.argmax(masked))
    r, n = divmod(flat, scn.num_subchannels)
    return float(masked[r, n]), (int(state.own_ms[r]), n)


@dataclass(frozen=True)
class AllocationEvent:
    bs: int
    ms: int
    subchannel: int
    estimated_rate: float


@dataclass(frozen=True)
class RoundRecord:
    index: int
    pa: tuple                 # (bs, value) for BSs active at round start
    allocations: tuple        # AllocationEvent
    terminations: tuple       # (bs, reason)


@dataclass(frozen=True)
class RoundTrace:
    rounds: tuple

    def final_allocation(self) -> Allocation:
        return Allocation.of((ev.bs, ev.ms, ev.subchannel)
                             for rec in self.rounds for ev in rec.allocations)


def _announce(state: BsState, b: int, n: int, scn: Scenario) -> None:
    mask = state.neighbor_used[b]
    if not mask[n]:
        mask[n] = True
        if state.own_ms.size:
            state.interference[:, n] += scn.gains[b, state.own_ms, n]


def run_distributed(scn: Scenario, p: Params, p0: float) -> tuple:
    """Run the protocol to quiescence; returns (allocation, trace).

    Every round ends with at least one allocation or one termination, so the
    round count is bounded by min(M, K*N) + K.
    """
    states = make_states(scn)
    active = [a for a in range(scn.num_bs)]
    records = []
    bound = min(scn.num_ms, scn.num_bs * scn.num_subchannels) + scn.num_bs

    while active:
        if len(records) >= bound:
            raise RuntimeError("protocol exceeded its round bound; "
                               "progress invariant violated")
        pa = {}
        cand = {}
        for a in active:
            pa[a], cand[a] = compute_pa(states[a], scn, p)

        terminations = []
        for a in active:
            st = states[a]
            if st.own_ms.size > 0 and bool(st.served.all()):
                st.reason = "all-ms-served"
            elif bool(st.used.all()):
                st.reason = "all-subchannels-used"
            elif cand[a] is None:
                st.reason = "no-candidate"
            elif pa[a] < p0:
                st.reason = "below-threshold"
            else:
                continue
            st.terminated = True
            terminations.append((a, st.reason))

        def conveyed(b: int) -> float:
            return -math.inf if states[b].terminated else pa.get(b, -math.inf)

        events = []
        for a in active:
            if states[a].terminated:
                continue
            if all(pa[a] >= conveyed(b) for b in scn.neighbors[a]):
                j, n = cand[a]
                st = states[a]
                st.served[np.searchsorted(st.own_ms, j)] = True
                st.used[n] = True
                st.assigned.append((j, n, pa[a]))
                events.append(AllocationEvent(a, j, n, pa[a]))

        for ev in events:
            for c in scn.neighbors[ev.bs]:
                _announce(states[c], ev.bs, ev.subchannel, scn)

        records.append(RoundRecord(
            index=len(records) + 1,
            pa=tuple((a, pa[a]) for a in active),
            allocations=tuple(events),
            terminations=tuple(terminations)))
        active = [a for a in active if not states[a].terminated]

    alloc = Allocation.of((a, j, n)
                          for a, st in enumerate(states)
                          for j, n, _ in st.assigned)
    return alloc, RoundTrace(rounds=tuple(records))


def solve_distributed(scn: Scenario, p: Params,
                      p0: float | None = None) -> tuple:
    """Wrapper returning (SolverReport, RoundTrace); p0 defaults to the
    alpha-adjusted threshold for this scenario's size."""
    if p0 is None:
        p0 = default_p0(scn.num_bs, scn.num_ms, scn.num_subchannels, p.alpha)
    alloc, trace = run_distributed(scn, p, p0)
    report = make_report(alloc, scn, p, method="distributed",
                         certified=False, certificate="none")
    return report, trace


def dump_trace(trace: RoundTrace, scn: Scenario, p: Params, path) -> None:
    """Write a line-per-event text trace, closing with the realized per-MS
    throughput of the final allocation next to each estimate."""
    alloc = trace.final_allocation()
    lines = [f"# distributed trace K={scn.num_bs} M={scn.num_ms} "
             f"N={scn.num_subchannels}"]
    for rec in trace.rounds:
        for a, v in rec.pa:
            lines.append(f"round={rec.index} bs={a} pa={v!r}")
        for ev in rec.allocations:
            lines.append(f"round={rec.index} bs={ev.bs} allocate "
                         f"ms={ev.ms} subchannel={ev.subchannel} "
                         f"estimated={ev.estimated_rate!r}")
        for a, reason in rec.terminations:
            lines.append(f"round={rec.index} bs={a} terminate reason={reason}")
    for rec in trace.rounds:
        for ev in rec.allocations:
            realized = ms_throughput(alloc, scn, p, ev.ms)
            lines.append(f"final bs={ev.bs} ms={ev.ms} "
                         f"subchannel={ev.subchannel} "
                         f"estimated={ev.estimated_rate!r} "
                         f"realized={realized!r}")
    Path(path).write_text("\n".join(lines) + "\n")
