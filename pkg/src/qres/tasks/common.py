from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..angular import HALF, SpinJ
from ..bayes import gauss_legendre

POSSIBLE_TOL = 1e-12
COLUMN_SUM_TOL = 1e-10

METRICS = ("avg_info_bits", "conclusive_prob", "inconclusive_prob")
TASKS = ("I", "II", "III")


@dataclass(frozen=True)
class Resource:
    """What Bob and Charlie share: a reference frame, a singlet, or a refbit."""

    kind: str
    spin: SpinJ | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("srf", "sss", "refbit"):
            raise ValueError(f"unknown resource kind {self.kind!r}")
        if self.kind == "sss" and not isinstance(self.spin, SpinJ):
            raise ValueError("a shared singlet needs a spin label")
        if self.kind == "sss" and self.spin.twice_j < 1:
            raise ValueError("singlet spin must be at least 1/2")
        if self.kind != "sss" and self.spin is not None:
            raise ValueError(f"{self.kind} takes no spin label")

    @classmethod
    def srf(cls) -> Resource:
        return cls("srf")

    @classmethod
    def sss(cls, j: SpinJ | str | float = HALF) -> Resource:
        return cls("sss", j if isinstance(j, SpinJ) else SpinJ.parse(j))

    @classmethod
    def refbit(cls) -> Resource:
        return cls("refbit")

    def __str__(self) -> str:
        return f"sss(j={self.spin})" if self.kind == "sss" else self.kind


@dataclass(frozen=True)
class TaskResult:
    task: str
    resource: Resource
    metric: str
    value: float
    parameter: float | None = None
    outcome_table: Mapping[tuple[str, str], float] | None = None
    extras: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.metric != "avg_info_bits" and not (-1e-12 <= self.value <= 1 + 1e-12):
            raise ValueError(f"{self.metric} must be a probability, got {self.value}")
        if self.outcome_table is not None:
            check_table(self.outcome_table)

    @property
    def hypotheses(self) -> list[str]:
        return list(dict.fromkeys(h for _, h in self.outcome_table or {}))

    @property
    def outcomes(self) -> list[str]:
        return list(dict.fromkeys(o for o, _ in self.outcome_table or {}))


def check_table(table: Mapping[tuple[str, str], float]) -> None:
    sums: dict[str, float] = {}
    for (_, hyp), p in table.items():
        if not (-1e-12 <= p <= 1 + 1e-12):
            raise ValueError(f"table entry {p} is not a probability")
        sums[hyp] = sums.get(hyp, 0.0) + p
    bad = {h: s for h, s in sums.items() if abs(s - 1.0) > COLUMN_SUM_TOL}
    if bad:
        raise ValueError(f"outcome columns do not sum to one: {bad}")


def as_table(outcomes: Sequence[str], hypotheses: Sequence[str], probs: np.ndarray) -> dict:
    """Dict keyed by (outcome, hypothesis) from an (n_outcomes, n_hypotheses) array."""
    probs = np.asarray(probs, dtype=float)
    return {(o, h): float(probs[i, k]) for i, o in enumerate(outcomes) for k, h in enumerate(hypotheses)}


def sphere_grid(theta_nodes: int, phi_nodes: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Directions and weights for averaging over the unit sphere.

    Polar angle: Gauss-Legendre with weight sin(theta)/2.  Azimuth: equally
    spaced points, exact for trigonometric polynomials of degree below
    ``phi_nodes``.  With one azimuthal point only phi = 0 is used.
    """
    th, tw = gauss_legendre(0.0, float(np.pi), theta_nodes)
    phis = 2 * np.pi * np.arange(phi_nodes) / phi_nodes
    theta = np.repeat(th, phi_nodes)
    phi = np.tile(phis, th.size)
    weight = np.repeat(0.5 * np.sin(th) * tw, phi_nodes) / phi_nodes
    return theta, phi, weight


def random_directions(n: int, seed: int, polar_margin: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Uniform directions on the sphere, optionally avoiding the poles."""
    rng = np.random.default_rng(seed)
    lo, hi = np.cos(np.pi - polar_margin), np.cos(polar_margin)
    theta = np.arccos(rng.uniform(lo, hi, n))
    phi = rng.uniform(0.0, 2 * np.pi, n)
    return theta, phi


@dataclass(frozen=True)
class Discrimination:
    """Outcome of classifying outcomes as conclusive or not."""

    conclusive: float
    conclusive_outcomes: tuple[int, ...]
    per_hypothesis: np.ndarray
    average_table: np.ndarray


def _conclusive_parts(tables, weights, tol):
    tables = np.asarray(tables, dtype=float)
    weights = np.asarray(weights, dtype=float)
    possible = (tables > tol).any(axis=-3)
    conclusive = possible.sum(axis=-1) == 1
    average = np.tensordot(weights / weights.sum(), tables, axes=([0], [-3]))
    per_hyp = (average * conclusive[..., None]).sum(axis=-2)
    return conclusive, average, per_hyp


def conclusive_probability(
    tables: np.ndarray,
    weights: np.ndarray,
    priors: Sequence[float] = (0.5, 0.5),
    tol: float = POSSIBLE_TOL,
) -> Discrimination:
    """Probability of an outcome that rules out all hypotheses but one.

    ``tables`` has shape (n_orientations, n_outcomes, n_hypotheses) and holds
    conditional outcome probabilities for each unknown orientation; ``weights``
    averages over orientations.  An outcome counts as possible under a
    hypothesis if it has probability above ``tol`` for some orientation, since
    the receivers never learn the orientation.
    """
    conclusive, average, per_hyp = _conclusive_parts(tables, weights, tol)
    return Discrimination(
        conclusive=float(np.asarray(priors, dtype=float) @ per_hyp),
        conclusive_outcomes=tuple(int(i) for i in np.flatnonzero(conclusive)),
        per_hypothesis=per_hyp,
        average_table=average,
    )


def batched_conclusive(
    tables: np.ndarray,
    weights: np.ndarray,
    priors: Sequence[float] = (0.5, 0.5),
    tol: float = POSSIBLE_TOL,
) -> np.ndarray:
    """Conclusive probability for a stack of problems, shape (..., n_orient, n_out, n_hyp)."""
    _, _, per_hyp = _conclusive_parts(tables, weights, tol)
    return per_hyp @ np.asarray(priors, dtype=float)
