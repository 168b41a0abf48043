"""Scenario and allocation files.

Scenarios are stored as a single JSON document:

    {
      "num_bs": K, "num_ms": M, "num_subchannels": N,
      "bs_positions": [[x, y], ...],        # K points in the unit square
      "ms_positions": [[x, y], ...],        # M points
      "association": [a_0, ..., a_{M-1}],   # serving BS per MS
      "neighbors": [[...], ...],            # sorted neighbor list per BS
      "gains": [[[...], ...], ...]          # H[bs][ms][subchannel]
    }

Gains may contain the string "inf" for an infinite entry; every other number
is written with repr so that load(save(s)) reproduces s bit for bit.
Allocations are stored as {"triples": [[bs, ms, subchannel], ...]}, sorted.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .model import Allocation, Scenario

__all__ = [
    "scenario_to_dict",
    "scenario_from_dict",
    "save_scenario",
    "load_scenario",
    "save_allocation",
    "load_allocation",
]


def _encode_gain(x: float):
    return "inf" if math.isinf(x) else float(x)


def _decode_gain(x) -> float:
    if x == "inf":
        return math.inf
    return float(x)


def scenario_to_dict(scn: Scenario) -> dict:
    return {
        "num_bs": scn.num_bs,
        "num_ms": scn.num_ms,
        "num_subchannels": scn.num_subchannels,
        "bs_positions": [[float(x), float(y)] for x, y in scn.bs_positions],
        "ms_positions": [[float(x), float(y)] for x, y in scn.ms_positions],
        "association": [int(a) for a in scn.association],
        "neighbors": [sorted(s) for s in scn.neighbors],
        "gains": [[[_encode_gain(float(g)) for g in row_n]
                   for row_n in row_m] for row_m in scn.gains],
    }


def scenario_from_dict(doc: dict) -> Scenario:
    gains = [[[_decode_gain(g) for g in row_n] for row_n in row_m]
             for row_m in doc["gains"]]
    return Scenario(
        num_bs=int(doc["num_bs"]),
        num_ms=int(doc["num_ms"]),
        num_subchannels=int(doc["num_subchannels"]),
        bs_positions=doc["bs_positions"],
        ms_positions=doc["ms_positions"],
        association=doc["association"],
        neighbors=tuple(frozenset(s) for s in doc["neighbors"]),
        gains=gains,
    )


def save_scenario(scn: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scn), indent=1) + "\n")


def load_scenario(path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text()))


def save_allocation(alloc: Allocation, path) -> None:
    doc = {"triples": [list(t) for t in alloc.sorted_triples]}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_allocation(path) -> Allocation:
    return Allocation.of(json.loads(Path(path).read_text())["triples"])
