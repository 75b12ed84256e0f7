"""Task I (angle between two spins) and task II (parallel vs anti-parallel)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np

from ..angular import HALF, SpinJ, singlet, swap_pair, total_spin_projectors_pair, total_spin_projectors_qubits
from ..bayes import DEFAULT_NODES, Likelihood, Prior, average_information_gain
from ..linalg import bloch_ket, ket, prob, tensor
from .common import Resource, TaskResult, as_table, conclusive_probability, random_directions
from .srf import SRF_OUTCOMES, srf_likelihood, srf_pair_table

QUBIT_PAIR_OUTCOMES = ("0,0", "0,1", "1,0", "1,1")
TASK2_HYPOTHESES = ("parallel", "anti-parallel")


def _angle_prior(quad_nodes: int) -> Prior:
    return Prior.continuous(lambda a: 0.5 * np.sin(a), 0.0, np.pi, quad_nodes)


def _parallel_prior() -> Prior:
    return Prior.discrete([0.0, np.pi], [0.5, 0.5])


def spin_pair_outcomes(j: SpinJ) -> tuple[str, ...]:
    """Labels "J_Bob,J_Charlie" with J in {j - 1/2, j + 1/2}, lower first."""
    lo, hi = str(j.j - Fraction(1, 2)), str(j.j + Fraction(1, 2))
    return tuple(f"{b},{c}" for b in (lo, hi) for c in (lo, hi))


# --- task I -----------------------------------------------------------------

def task1_probabilities_closed_form(alpha) -> np.ndarray:
    s = np.sin(np.asarray(alpha, dtype=float) / 2) ** 2
    return np.stack([s / 8, 0.25 - s / 8, 0.25 - s / 8, 0.5 + s / 8], axis=-1)


def task1_probabilities_constructive(alpha: float, phi: float = 0.0) -> np.ndarray:
    """Total-spin outcome probabilities of |z+>|psi->|n2> with n2 at angle ``alpha`` from z.

    Bob holds factors 1-2, Charlie factors 3-4.
    """
    pi0, pi1 = total_spin_projectors_qubits()
    chi = tensor(ket("+"), singlet(HALF), bloch_ket(alpha, phi))
    return np.array([prob(chi, [a, b]) for a in (pi0, pi1) for b in (pi0, pi1)])


def task1_likelihood_sss() -> Likelihood:
    def func(alpha):
        alpha = np.asarray(alpha, dtype=float)
        if np.any(alpha < -1e-12) or np.any(alpha > np.pi + 1e-12):
            raise ValueError("angle outside [0, pi]")
        return task1_probabilities_closed_form(alpha)

    return Likelihood(QUBIT_PAIR_OUTCOMES, func)


def task1_avg_info(resource: Resource, quad_nodes: int = DEFAULT_NODES) -> TaskResult:
    """Mutual information between the angle and the outcome, prior sin(alpha)/2."""
    if resource.kind == "srf":
        lik = srf_likelihood("I", quad_nodes)
    elif resource.kind == "sss" and resource.spin == HALF:
        lik = task1_likelihood_sss()
    else:
        raise ValueError(f"task I supports srf and sss(j=1/2), not {resource}")
    value = average_information_gain(_angle_prior(quad_nodes), lik)
    return TaskResult("I", resource, "avg_info_bits", value, parameter=_parameter(resource))


def _parameter(resource: Resource) -> float | None:
    return float(resource.spin) if resource.kind == "sss" else None


# --- task II ----------------------------------------------------------------

def task2_probabilities_closed_form(j: SpinJ) -> np.ndarray:
    """Shape (4, 2): outcome rows per ``spin_pair_outcomes``, columns parallel / anti-parallel."""
    jj = j.j
    d = 3 * (1 + 2 * jj) ** 2
    parallel = [jj * (2 * jj - 1), 4 * jj * (1 + jj), 4 * jj * (1 + jj), (1 + jj) * (3 + 2 * jj)]
    anti = [jj * (1 + 4 * jj), 2 * jj * (1 + jj), 2 * jj * (1 + jj), (1 + jj) * (3 + 4 * jj)]
    return np.array([[float(p / d), float(q / d)] for p, q in zip(parallel, anti)])


def task2_probabilities_constructive(j: SpinJ) -> np.ndarray:
    """Same table evaluated on |z+>|Psi_j>|z+-> with explicit pair projectors.

    Factor order is (1, B, C, 2): Bob measures (1, B), Charlie (C, 2).
    """
    bob = total_spin_projectors_pair(j)
    charlie = tuple(swap_pair(p) for p in bob)
    out = np.empty((4, 2))
    for col, last in enumerate(("+", "-")):
        state = tensor(ket("+"), singlet(j), ket(last))
        out[:, col] = [prob(state, [a, b]) for a in bob for b in charlie]
    return out


def task2_likelihood_sss(j: SpinJ, method: str = "closed_form") -> Likelihood:
    if method == "closed_form":
        table = task2_probabilities_closed_form(j)
    elif method == "constructive":
        table = task2_probabilities_constructive(j)
    else:
        raise ValueError(f"unknown method {method!r}")

    def func(alpha):
        alpha = np.asarray(alpha, dtype=float)
        parallel = np.isclose(alpha, 0.0)
        anti = np.isclose(alpha, np.pi)
        if not np.all(parallel | anti):
            raise ValueError("task II pairs are parallel (0) or anti-parallel (pi)")
        return np.where(parallel[:, None], table[:, 0], table[:, 1])

    return Likelihood(spin_pair_outcomes(j), func)


def _task2_likelihood(resource: Resource, quad_nodes: int) -> Likelihood:
    if resource.kind == "srf":
        return srf_likelihood("II", quad_nodes)
    if resource.kind == "sss":
        return task2_likelihood_sss(resource.spin)
    raise ValueError(f"task II supports srf and sss, not {resource}")


def task2_avg_info(resource: Resource, quad_nodes: int = DEFAULT_NODES) -> TaskResult:
    lik = _task2_likelihood(resource, quad_nodes)
    table = lik.table([0.0, np.pi]).T
    return TaskResult(
        "II",
        resource,
        "avg_info_bits",
        average_information_gain(_parallel_prior(), lik),
        parameter=_parameter(resource),
        outcome_table=as_table(lik.outcomes, TASK2_HYPOTHESES, table),
    )


def task2_spinj_sweep(j_values: Iterable[SpinJ]) -> list[TaskResult]:
    """Task II information gain for a spin-j singlet at each j (closed forms)."""
    j_values = list(j_values)
    if not j_values:
        raise ValueError("need at least one spin value")
    return [task2_avg_info(Resource.sss(j)) for j in j_values]


def task2_conclusive(
    resource: Resource,
    n_directions: int = 100,
    seed: int = 0,
    polar_margin: float = 0.1,
    quad_nodes: int = DEFAULT_NODES,
) -> TaskResult:
    """Probability of unambiguously telling parallel from anti-parallel pairs.

    For a shared singlet the outcome table does not depend on the pair's
    direction.  For a shared frame it does, so possibility of each outcome is
    decided over ``n_directions`` random directions and the probabilities are
    averaged with the orientation-averaged likelihood.
    """
    if resource.kind == "sss":
        table = task2_probabilities_closed_form(resource.spin)
        tables, weights = table[None], np.ones(1)
        outcomes = spin_pair_outcomes(resource.spin)
        extras = {}
    elif resource.kind == "srf":
        theta, phi = random_directions(n_directions, seed, polar_margin)
        tables = np.stack([srf_pair_table(t, p) for t, p in zip(theta, phi)])
        table = srf_likelihood("II", quad_nodes).table([0.0, np.pi]).T
        weights = np.ones(len(tables))
        outcomes = SRF_OUTCOMES
        extras = {"min_sampled_probability": float(tables.min())}
    else:
        raise ValueError(f"task II supports srf and sss, not {resource}")
    disc = conclusive_probability(tables, weights)
    value = 0.5 * sum(table[i].sum() for i in disc.conclusive_outcomes)
    for k, hyp in enumerate(TASK2_HYPOTHESES):
        extras[f"conclusive_given_{hyp}"] = float(sum(table[i, k] for i in disc.conclusive_outcomes))
    return TaskResult(
        "II",
        resource,
        "conclusive_prob",
        float(value),
        parameter=_parameter(resource),
        outcome_table=as_table(outcomes, TASK2_HYPOTHESES, table),
        extras=extras,
    )
