"""Shared helpers: hand-built scenarios, certified-instance construction,
and slow-but-simple reference solvers used to cross-check the fast paths.
"""

import itertools
import math
from dataclasses import replace

import numpy as np
import pytest

from icicfair import (Allocation, Params, Scenario, ScenarioConfig,
                      check_conditions, generate, tau_alpha_utility)
from icicfair.matching import (cond1_beta_threshold, cond2_beta_threshold,
                               cond3_beta_threshold)


def tiny_scenario(gains, association, neighbors=None, num_subchannels=None):
    """Scenario with explicit gains and dummy positions.

    gains is a nested list or array shaped (K, M, N); neighbors defaults to
    the complete graph.
    """
    arr = np.asarray(gains, dtype=float)
    k, m, n = arr.shape
    if num_subchannels is not None:
        assert n == num_subchannels
    if neighbors is None:
        neighbors = tuple(frozenset(b for b in range(k) if b != a)
                          for a in range(k))
    bs_pos = [[(i + 0.5) / k, 0.25] for i in range(k)]
    ms_pos = [[(j + 0.5) / m, 0.75] for j in range(m)]
    return Scenario(num_bs=k, num_ms=m, num_subchannels=n,
                    bs_positions=bs_pos, ms_positions=ms_pos,
                    association=association, neighbors=neighbors, gains=arr)


def certified_instance(rng, alpha, num_bs, num_ms, num_subchannels):
    """Random instance whose crosstalk is constructed to satisfy the
    certificate that applies at this alpha.

    Placements and association come from the standard generator; serving
    gains are redrawn from a band where the certificate thresholds are
    comfortably below the crosstalk margin, and every crosstalk gain is set
    to (threshold * margin) times the serving gain.  Power and noise are 1,
    so the serving SNR equals the serving gain.  The result is asserted to
    certify before it is returned.
    """
    cfg = ScenarioConfig(num_bs=num_bs, num_ms=num_ms,
                         num_subchannels=num_subchannels,
                         seed=int(rng.integers(2 ** 31)))
    base = generate(cfg)
    k, m, n_sub = num_bs, num_ms, num_subchannels
    if alpha >= 2.0:
        etas = rng.uniform(30.0, 33.0, (m, n_sub))
        tau = math.log1p(etas.max()) + rng.uniform(1e-2, 1e-1)
        threshold = lambda e: cond2_beta_threshold(alpha, tau, e)
    elif alpha == 1.0:
        etas = rng.uniform(100.0, 1000.0, (m, n_sub))
        tau = rng.uniform(0.99, 0.9999)
        threshold = lambda e: cond3_beta_threshold(tau, e)
    else:
        etas = rng.uniform(100.0, 1000.0, (m, n_sub))
        tau = alpha - rng.uniform(1e-4, 1e-3)
        threshold = lambda e: cond1_beta_threshold(alpha, tau, e)
    gains = np.zeros((k, m, n_sub))
    for j in range(m):
        a = int(base.association[j])
        for n in range(n_sub):
            e = etas[j, n]
            gains[a, j, n] = e
            t = threshold(e)
            for b in range(k):
                if b != a:
                    gains[b, j, n] = e * t * rng.uniform(1.05, 3.0)
    scn = replace(base, gains=gains)
    p = Params(alpha=alpha, tau=tau, power=1.0, noise=1.0)
    assert check_conditions(scn, p).applicable_holds
    return scn, p


def brute_force_search(scn, p):
    """Reference optimum by plain enumeration.

    Walks every feasible allocation cell by cell (each (bs, subchannel) pair
    independently serves one associated MS or stays silent) and evaluates
    the utility through the scalar model functions, so it shares no code
    with the vectorized search.  Ties resolve to the smallest sorted triple
    tuple, under exact float equality.
    """
    members = [scn.members(a) for a in range(scn.num_bs)]
    cells = [(a, n) for a in range(scn.num_bs)
             for n in range(scn.num_subchannels)]
    choices = [(None,) + members[a] for a, _ in cells]
    best_val = -math.inf
    best_triples = None
    for picks in itertools.product(*choices):
        alloc = Allocation.of((a, j, n) for (a, n), j in zip(cells, picks)
                              if j is not None)
        val = tau_alpha_utility(alloc, scn, p)
        key = alloc.sorted_triples
        if val > best_val or (val == best_val and key < best_triples):
            best_val, best_triples = val, key
    return best_val, best_triples


def brute_matching_best(weight):
    """Best total weight over all matchings of a bipartite weight matrix,
    the empty matching included."""
    w = np.asarray(weight, dtype=float)
    rows, cols = w.shape
    best = 0.0
    for r in range(1, min(rows, cols) + 1):
        for row_set in itertools.combinations(range(rows), r):
            for col_perm in itertools.permutations(range(cols), r):
                total = sum(w[i, c] for i, c in zip(row_set, col_perm))
                if total > best:
                    best = total
    return best


# Canonical small graphs: (name, vertex count, edges).
CANONICAL_GRAPHS = (
    ("triangle", 3, ((0, 1), (1, 2), (0, 2))),
    ("path3", 3, ((0, 1), (1, 2))),
    ("cycle5", 5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))),
    ("star4", 5, ((0, 1), (0, 2), (0, 3), (0, 4))),
    ("edgeless4", 4, ()),
)


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
