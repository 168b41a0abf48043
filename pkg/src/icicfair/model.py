"""Problem model: scenarios, allocations, and the throughput/fairness metrics.

A scenario is a multi-cell OFDMA downlink snapshot: K base stations (BS),
M mobile stations (MS), N subchannels, a fixed serving association, a
neighbor relation between cells, and a gain tensor H[bs][ms][subchannel].
Every BS transmits with the same fixed power on every subchannel it uses,
so an allocation is purely binary: which (bs, ms, subchannel) triples are
active.  Gains are extended nonnegative reals; an infinite gain models a
dominant interferer and is the one idealization the arithmetic here has to
support (infinite interference drives a rate to zero, never to NaN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GainDomainError, MalformedAllocationError, NoInterfererError

__all__ = [
    "Params",
    "Scenario",
    "Allocation",
    "sinr_rate",
    "is_feasible",
    "ms_throughput",
    "throughput_vector",
    "total_throughput",
    "tau_alpha_utility",
    "fairness_utility_term",
    "jain_fairness",
    "eta",
    "beta",
]


@dataclass(frozen=True)
class Params:
    """Solver parameters: fairness exponent alpha, utility shift tau,
    transmit power, and noise floor.

    The per-MS utility of throughput u is ln(tau + u) when alpha == 1 and
    (tau + u)^(1 - alpha) / (1 - alpha) otherwise; tau > 0 keeps the value
    finite for unserved MSs and alpha >= 0 tunes the throughput/fairness
    trade-off (alpha = 0 is sum throughput plus a constant).
    """

    alpha: float
    tau: float
    power: float = 1.0
    noise: float = 1.0

    def __post_init__(self):
        if not (self.alpha >= 0.0):
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not (self.tau > 0.0):
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not (self.power > 0.0):
            raise ValueError(f"power must be > 0, got {self.power}")
        if not (self.noise > 0.0):
            raise ValueError(f"noise must be > 0, got {self.noise}")


def _frozen_array(values, dtype, shape) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable network snapshot.

    Fields:
        num_bs, num_ms, num_subchannels: sizes K, M, N.
        bs_positions, ms_positions: points in the unit square.
        association: association[j] is the serving BS of MS j.
        neighbors: per-BS frozensets, symmetric and irreflexive.
        gains: H[bs][ms][subchannel], nonnegative, +inf allowed.
    """

    num_bs: int
    num_ms: int
    num_subchannels: int
    bs_positions: np.ndarray
    ms_positions: np.ndarray
    association: np.ndarray
    neighbors: tuple
    gains: np.ndarray

    def __post_init__(self):
        k, m, n = self.num_bs, self.num_ms, self.num_subchannels
        if min(k, m, n) < 1:
            raise ValueError("scenario sizes must be positive")
        object.__setattr__(self, "bs_positions",
                           _frozen_array(self.bs_positions, float, (k, 2)))
        object.__setattr__(self, "ms_positions",
                           _frozen_array(self.ms_positions, float, (m, 2)))
        object.__setattr__(self, "association",
                           _frozen_array(self.association, np.int64, (m,)))
        object.__setattr__(self, "gains",
                           _frozen_array(self.gains, float, (k, m, n)))
        for pos, label in ((self.bs_positions, "bs"), (self.ms_positions, "ms")):
            if np.any(pos < 0.0) or np.any(pos > 1.0):
                raise ValueError(f"{label} positions must lie in the unit square")
        if np.any(self.association < 0) or np.any(self.association >= k):
            raise ValueError("association refers to a nonexistent BS")
        neigh = tuple(frozenset(int(b) for b in s) for s in self.neighbors)
        if len(neigh) != k:
            raise ValueError("neighbors must list one set per BS")
        for a, s in enumerate(neigh):
            if a in s:
                raise ValueError(f"BS {a} listed as its own neighbor")
            for b in s:
                if not (0 <= b < k):
                    raise ValueError(f"neighbor {b} of BS {a} out of range")
                if a not in neigh[b]:
                    raise ValueError("neighbor relation must be symmetric")
        object.__setattr__(self, "neighbors", neigh)
        if np.any(np.isnan(self.gains)) or np.any(self.gains < 0.0):
            raise ValueError("gains must be nonnegative (inf allowed, NaN not)")

    def members(self, a: int) -> tuple:
        """MS indices served by BS a, ascending."""
        return tuple(int(j) for j in np.flatnonzero(self.association == a))


@dataclass(frozen=True)
class Allocation:
    """A set of active (bs, ms, subchannel) triples."""

    triples: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, triples: Iterable) -> "Allocation":
        return cls(frozenset((int(a), int(j), int(n)) for a, j, n in triples))

    @property
    def sorted_triples(self) -> tuple:
        return tuple(sorted(self.triples))

    def served_ms(self) -> frozenset:
        return frozenset(j for _, j, _ in self.triples)


def _check_indices(alloc: Allocation, scn: Scenario) -> None:
    for a, j, n in alloc.triples:
        if not (0 <= a < scn.num_bs and 0 <= j < scn.num_ms
                and 0 <= n < scn.num_subchannels):
            raise MalformedAllocationError(f"triple {(a, j, n)} out of range")
        if scn.association[j] != a:
            raise MalformedAllocationError(
                f"MS {j} is served by BS {int(scn.association[j])}, not BS {a}")


def is_feasible(alloc: Allocation, scn: Scenario) -> bool:
    """True iff every (cell, subchannel) pair carries at most one MS.

    Cross-cell reuse of a subchannel is allowed; raising MalformedAllocationError
    means the allocation does not even parse against this scenario.
    """
    _check_indices(alloc, scn)
    seen = set()
    for a, _, n in alloc.triples:
        if (a, n) in seen:
            return False
        seen.add((a, n))
    return True


def _require_feasible(alloc: Allocation, scn: Scenario) -> None:
    if not is_feasible(alloc, scn):
        raise MalformedAllocationError("allocation assigns a (cell, subchannel) twice")


def sinr_rate(serving_gain: float, interference_gain: float,
              power: float, noise: float) -> float:
    """Shannon rate ln(1 + SINR) for one MS on one subchannel.

    SINR = power * serving_gain / (power * interference_gain + noise).
    Extended-real rules: a zero serving gain or an infinite aggregate
    interference gain gives rate 0 (never NaN).
    """
    if serving_gain == 0.0:
        return 0.0
    if math.isinf(interference_gain):
        return 0.0
    return math.log1p(power * serving_gain / (power * interference_gain + noise))


def _transmitting(alloc: Allocation, scn: Scenario) -> dict:
    """Map subchannel -> sorted tuple of BSs transmitting on it."""
    by_n: dict = {}
    for a, _, n in alloc.triples:
        by_n.setdefault(n, set()).add(a)
    return {n: tuple(sorted(s)) for n, s in by_n.items()}


def _ms_rate(alloc: Allocation, scn: Scenario, p: Params, j: int, tx: dict) -> float:
    a = int(scn.association[j])
    total = 0.0
    for aa, jj, n in sorted(alloc.triples):
        if jj != j:
            continue
        interference = sum(float(scn.gains[i, j, n]) for i in tx.get(n, ()) if i != a)
        total += sinr_rate(float(scn.gains[a, j, n]), interference, p.power, p.noise)
    return total


def ms_throughput(alloc: Allocation, scn: Scenario, p: Params, j: int) -> float:
    """Throughput of MS j: sum over its assigned subchannels of ln(1 + SINR),
    where the interference sums the gains of every other BS active on that
    subchannel (all cells, not just neighbors)."""
    _require_feasible(alloc, scn)
    if not (0 <= j < scn.num_ms):
        raise MalformedAllocationError(f"MS index {j} out of range")
    return _ms_rate(alloc, scn, p, j, _transmitting(alloc, scn))


def throughput_vector(alloc: Allocation, scn: Scenario, p: Params) -> list:
    """Per-MS throughputs [U_0, ..., U_{M-1}]."""
    _require_feasible(alloc, scn)
    tx = _transmitting(alloc, scn)
    return [_ms_rate(alloc, scn, p, j, tx) for j in range(scn.num_ms)]


def total_throughput(alloc: Allocation, scn: Scenario, p: Params) -> float:
    return sum(throughput_vector(alloc, scn, p))


def fairness_utility_term(u: float, p: Params) -> float:
    """Per-MS utility of throughput u under (tau, alpha)."""
    if p.alpha == 1.0:
        return math.log(p.tau + u)
    return (p.tau + u) ** (1.0 - p.alpha) / (1.0 - p.alpha)


def tau_alpha_utility(alloc: Allocation, scn: Scenario, p: Params) -> float:
    """Network utility: sum over MSs of the shifted alpha-fair utility of
    their throughput.  At alpha = 0 this is computed as
    M * tau + total_throughput, which the generic formula equals exactly."""
    vec = throughput_vector(alloc, scn, p)
    if p.alpha == 0.0:
        return scn.num_ms * p.tau + sum(vec)
    return sum(fairness_utility_term(u, p) for u in vec)


def jain_fairness(u: Sequence) -> float:
    """Jain's index (sum u)^2 / (M * sum u^2) of a nonnegative vector.

    Equals 1 for any uniform positive vector and n/M when exactly n entries
    share one positive value.  The all-zero vector is defined to score 1.
    """
    vec = [float(x) for x in u]
    if not vec:
        raise ValueError("fairness index of an empty vector")
    if any(x < 0.0 for x in vec):
        raise ValueError("fairness index requires nonnegative entries")
    s = sum(vec)
    if s == 0.0:
        return 1.0
    return s * s / (len(vec) * sum(x * x for x in vec))


def eta(scn: Scenario, p: Params, a: int, j: int, n: int) -> float:
    """Interference-free SNR power * H[a, j, n] / noise."""
    return p.power * float(scn.gains[a, j, n]) / p.noise


def beta(scn: Scenario, a: int, j: int, n: int) -> float:
    """Smallest crosstalk-to-serving gain ratio for MS j on subchannel n:
    min over BSs b != a of H[b, j, n] / H[a, j, n]."""
    if scn.num_bs < 2:
        raise NoInterfererError("beta needs at least two cells")
    serving = float(scn.gains[a, j, n])
    if serving == 0.0:
        raise GainDomainError(f"serving gain is zero for (bs={a}, ms={j}, n={n})")
    others = [float(scn.gains[b, j, n]) for b in range(scn.num_bs) if b != a]
    return min(x / serving for x in others)
