"""Every published number recomputed and checked against its tolerance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import SpinJ, oracle_projectors, total_spin_projectors_pair
from .bayes import DEFAULT_NODES
from .tasks import (
    Resource,
    optimize_refbit_measurement,
    task1_avg_info,
    task2_avg_info,
    task2_conclusive,
    task2_probabilities_closed_form,
    task2_probabilities_constructive,
    task2_spinj_sweep,
    task3_conclusive,
)


@dataclass(frozen=True)
class Anchor:
    name: str
    value: float
    expected: float
    tol: float
    # "abs": |value - expected| <= tol; "below": value < expected
    check: str = "abs"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.check == "below":
            return self.value < self.expected
        return abs(self.value - self.expected) <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.check == "below":
            target = f"< {self.expected:.12g}"
        else:
            target = f"{self.expected:.12g} +- {self.tol:.0e}"
        return f"{status}  {self.name:<40} value={self.value:.12g}  expected {target}"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "expected": self.expected,
            "tol": self.tol,
            "check": self.check,
            "passed": self.passed,
        }


def _binary_entropy(p: float) -> float:
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def _safe(fn) -> float:
    # a numerical failure is reported as a failed anchor, never raised
    try:
        return float(fn())
    except (ArithmeticError, ValueError, np.linalg.LinAlgError):
        return float("nan")


def _max_dev(pairs) -> float:
    return max(float(np.max(np.abs(a - b))) for a, b in pairs)


def _spin_j_equivalence(max_twice_j: int) -> tuple[float, float]:
    js = [SpinJ(t) for t in range(1, max_twice_j + 1)]
    closed = _max_dev((task2_probabilities_closed_form(j), task2_probabilities_constructive(j)) for j in js)
    proj = _max_dev(
        (a.matrix, b.matrix)
        for j in js
        for a, b in zip(total_spin_projectors_pair(j), oracle_projectors(j))
    )
    return closed, proj


def reproduce_all(quad_nodes: int = DEFAULT_NODES, seed: int = 0) -> list[Anchor]:
    """Recompute every published value; one :class:`Anchor` per check, in a fixed order."""
    n = quad_nodes
    anchors = [
        Anchor("task1.info.srf", _safe(lambda: task1_avg_info(Resource.srf(), n).value), 0.0270, 5e-4),
        Anchor("task1.info.sss", _safe(lambda: task1_avg_info(Resource.sss(), n).value), 0.0284, 5e-4),
    ]

    srf2 = _safe(lambda: task2_avg_info(Resource.srf(), n).value)
    anchors += [
        Anchor("task2.info.srf", srf2, 0.0817, 5e-4),
        Anchor("task2.info.srf.analytic", srf2, 1 - _binary_entropy(1 / 3), 1e-9),
        Anchor("task2.info.sss_j=1/2", _safe(lambda: task2_avg_info(Resource.sss("1/2")).value), 0.0981, 5e-4),
        Anchor("task2.info.sss_j=1", _safe(lambda: task2_avg_info(Resource.sss(1)).value), 0.0841, 5e-4),
    ]

    sweep = [r.value for r in task2_spinj_sweep(SpinJ(k) for k in range(1, 51))]
    anchors += [
        Anchor("sweep.max_step_j<=25", float(np.max(np.diff(sweep))), 0.0, 0.0, check="below"),
        Anchor("sweep.j=25", sweep[-1], 0.0817, 2e-3),
        Anchor("sweep.j=50", _safe(lambda: task2_avg_info(Resource.sss(50)).value), 0.0817, 1e-3),
    ]

    anchors += [
        Anchor("task3.conclusive.srf", _safe(lambda: task3_conclusive(Resource.srf(), n).value), 1 / 3, 1e-10),
        Anchor("task3.conclusive.sss", _safe(lambda: task3_conclusive(Resource.sss(), n).value), 3 / 8, 1e-12),
        Anchor("task3.conclusive.refbit", _safe(lambda: task3_conclusive(Resource.refbit(), n).value), 1 / 24, 1e-10),
    ]

    c_sss = task2_conclusive(Resource.sss(), seed=seed)
    anchors += [
        Anchor("task2.conclusive.sss", c_sss.value, 1 / 16, 1e-12),
        Anchor("task2.conclusive.sss_given_antiparallel", c_sss.extras["conclusive_given_anti-parallel"], 1 / 8, 1e-12),
        Anchor("task2.conclusive.srf", _safe(lambda: task2_conclusive(Resource.srf(), seed=seed, quad_nodes=n).value),
               0.0, 0.0),
    ]

    try:
        opt = optimize_refbit_measurement(101, n)
        best, beta_edge, interior = opt.conclusive, min(opt.beta, 1 - opt.beta), float(opt.grid[1:-1].max())
    except (ArithmeticError, ValueError, np.linalg.LinAlgError):
        best = beta_edge = interior = float("nan")
    anchors += [
        Anchor("refbit_povm.optimum", best, 1 / 24, 1e-6),
        Anchor("refbit_povm.beta_on_boundary", beta_edge, 0.0, 0.0),
        Anchor("refbit_povm.interior_max", interior, 1e-12, 0.0, check="below"),
    ]

    closed_dev, proj_dev = _spin_j_equivalence(20)
    anchors += [
        Anchor("spin_j.closed_vs_constructive", closed_dev, 1e-10, 0.0, check="below"),
        Anchor("spin_j.projectors_vs_oracle", proj_dev, 1e-10, 0.0, check="below"),
    ]
    return anchors
