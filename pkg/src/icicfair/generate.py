"""Random scenario generation and the independent-set gadget.

Draw order is part of the contract: with a fixed seed the generator produces
a bit-identical scenario on every run.  Draws happen in this order, all from
one numpy Generator (PCG64):

    1. BS positions, one point at a time (rng.random(2) per attempt),
       rejection-resampled until the new point keeps pairwise distance
       >= d_min from every accepted BS;
    2. MS positions, rng.random((M, 2));
    3. shadowing exponents, rng.normal(0, shadow_sigma_db, (K, M)),
       row-major, turned into linear factors 10**(g_db / 10);
    4. fast fading, rng.rayleigh(rayleigh_scale, (K, M, N)), row-major.

Gains are gain_constant * shadow * fading / distance**path_loss_exponent.
Association is nearest-BS (ties to the lowest index); two BSs are neighbors
iff their distance is <= neighbor_radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PlacementInfeasibleError
from .model import Scenario

__all__ = ["ScenarioConfig", "pathloss_gain", "generate", "mis_gadget_scenario"]

_PLACEMENT_ATTEMPT_CAP = 10 ** 6


@dataclass(frozen=True)
class ScenarioConfig:
    num_bs: int
    num_ms: int
    num_subchannels: int
    seed: int
    d_min: float = 0.1
    neighbor_radius: float = 0.4
    path_loss_exponent: float = 3.0
    gain_constant: float = 0.01
    shadow_sigma_db: float = 4.0
    rayleigh_scale: float = 1.0

    def __post_init__(self):
        if min(self.num_bs, self.num_ms, self.num_subchannels) < 1:
            raise ValueError("scenario sizes must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.d_min < 0 or self.neighbor_radius < 0:
            raise ValueError("distances must be nonnegative")
        if not (2.0 < self.path_loss_exponent < 4.0):
            raise ValueError("path_loss_exponent must lie in (2, 4)")
        if self.gain_constant <= 0 or self.rayleigh_scale <= 0:
            raise ValueError("gain_constant and rayleigh_scale must be positive")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be nonnegative")


def pathloss_gain(constant, exponent, distance, shadow, fading):
    """Link gain constant * shadow * fading / distance**exponent.

    Plain arithmetic, so numpy arrays broadcast through it unchanged.
    """
    return constant * shadow * fading / distance ** exponent


def _place_bs(rng: np.random.Generator, k: int, d_min: float) -> np.ndarray:
    points = np.empty((k, 2))
    attempts = 0
    placed = 0
    while placed < k:
        attempts += 1
        if attempts > _PLACEMENT_ATTEMPT_CAP:
            raise PlacementInfeasibleError(
                f"could not place {k} BSs at pairwise distance {d_min} "
                f"within {_PLACEMENT_ATTEMPT_CAP} draws")
        cand = rng.random(2)
        if placed and np.min(np.hypot(*(points[:placed] - cand).T)) < d_min:
            continue
        points[placed] = cand
        placed += 1
    return points


def generate(cfg: ScenarioConfig) -> Scenario:
    """Draw a scenario from the documented distribution; same seed, same bits."""
    rng = np.random.default_rng(cfg.seed)
    k, m, n = cfg.num_bs, cfg.num_ms, cfg.num_subchannels

    bs_pos = _place_bs(rng, k, cfg.d_min)
    ms_pos = rng.random((m, 2))
    shadow = 10.0 ** (rng.normal(0.0, cfg.shadow_sigma_db, (k, m)) / 10.0)
    fading = rng.rayleigh(cfg.rayleigh_scale, (k, m, n))

    # distance from every BS to every MS, shape (K, M)
    dist = np.hypot(bs_pos[:, None, 0] - ms_pos[None, :, 0],
                    bs_pos[:, None, 1] - ms_pos[None, :, 1])
    association = np.argmin(dist, axis=0)

    bs_dist = np.hypot(bs_pos[:, None, 0] - bs_pos[None, :, 0],
                       bs_pos[:, None, 1] - bs_pos[None, :, 1])
    neighbors = tuple(
        frozenset(int(b) for b in range(k)
                  if b != a and bs_dist[a, b] <= cfg.neighbor_radius)
        for a in range(k))

    gains = pathloss_gain(cfg.gain_constant, cfg.path_loss_exponent,
                          dist[:, :, None], shadow[:, :, None], fading)

    return Scenario(num_bs=k, num_ms=m, num_subchannels=n,
                    bs_positions=bs_pos, ms_positions=ms_pos,
                    association=association, neighbors=neighbors, gains=gains)


def mis_gadget_scenario(num_vertices: int, edges) -> tuple:
    """Deterministic scenario whose optimal utility encodes the maximum
    independent set of the given graph.

    One cell per vertex, one MS per cell, a single subchannel.  Serving gain
    2 everywhere; the crosstalk gain between two cells is infinite iff their
    vertices are adjacent, else zero.  With power = noise = 1 a served MS
    gets throughput ln 3 when no graph neighbor transmits and 0 otherwise,
    so maximizing any shifted alpha-fair utility selects an independent set
    of maximum size.

    Returns (scenario, params_template) where params_template holds the
    power and noise the construction assumes; the caller picks alpha and tau.
    """
    v = int(num_vertices)
    if v < 1:
        raise ValueError("graph must have at least one vertex")
    edge_set = set()
    for u, w in edges:
        u, w = int(u), int(w)
        if not (0 <= u < v and 0 <= w < v) or u == w:
            raise ValueError(f"bad edge ({u}, {w}) for {v} vertices")
        edge_set.add((min(u, w), max(u, w)))

    xs = [(i + 0.5) / v for i in range(v)]
    bs_pos = [[x, 0.25] for x in xs]
    ms_pos = [[x, 0.75] for x in xs]
    gains = np.zeros((v, v, 1))
    for i in range(v):
        gains[i, i, 0] = 2.0
    for u, w in edge_set:
        gains[u, w, 0] = math.inf
        gains[w, u, 0] = math.inf

    neighbors = tuple(frozenset(b for b in range(v) if b != a) for a in range(v))
    scn = Scenario(num_bs=v, num_ms=v, num_subchannels=1,
                   bs_positions=bs_pos, ms_positions=ms_pos,
                   association=list(range(v)), neighbors=neighbors, gains=gains)
    return scn, {"power": 1.0, "noise": 1.0}
