"""Uniform result record produced by every solver."""

from __future__ import annotations

from dataclasses import dataclass

from .model import (Allocation, Params, Scenario, jain_fairness,
                    tau_alpha_utility, throughput_vector)

__all__ = ["SolverReport", "make_report", "report_to_dict"]


@dataclass(frozen=True)
class SolverReport:
    """What a solver returns: the allocation plus the metrics evaluated on it
    through the model functions (so the numbers are always mutually consistent),
    and provenance: which method ran and whether the result carries an
    optimality certificate."""

    allocation: Allocation
    utility: float
    total_throughput: float
    fairness_index: float
    served: int
    method: str
    certified: bool
    certificate: str


def make_report(alloc: Allocation, scn: Scenario, p: Params,
                method: str, certified: bool, certificate: str) -> SolverReport:
    vec = throughput_vector(alloc, scn, p)
    return SolverReport(
        allocation=alloc,
        utility=tau_alpha_utility(alloc, scn, p),
        total_throughput=sum(vec),
        fairness_index=jain_fairness(vec),
        served=len(alloc.served_ms()),
        method=method,
        certified=certified,
        certificate=certificate,
    )


def report_to_dict(report: SolverReport) -> dict:
    return {
        "method": report.method,
        "utility": report.utility,
        "total_throughput": report.total_throughput,
        "fairness_index": report.fairness_index,
        "served": report.served,
        "certified": report.certified,
        "certificate": report.certificate,
        "allocation": [list(t) for t in report.allocation.sorted_triples],
    }
