"""Bayesian updating and information gain over a scalar parameter.

Continuous priors live on a closed interval and are integrated with a fixed
Gauss-Legendre rule; discrete priors are weighted point sets.  Information is
measured in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

DEFAULT_NODES = 512
NORMALIZATION_TOL = 1e-9
DISCRETE_TOL = 1e-12
OUTCOME_SUM_TOL = 1e-10
ZERO_OUTCOME = 1e-14


@lru_cache(maxsize=32)
def gauss_legendre(a: float, b: float, n: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [a, b]."""
    if n < 1:
        raise ValueError(f"need at least one quadrature node, got {n}")
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    nodes = half * x + 0.5 * (a + b)
    weights = half * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int = DEFAULT_NODES) -> float:
    """Integral of a vectorized ``f`` over [a, b]."""
    nodes, weights = gauss_legendre(float(a), float(b), n)
    values = np.asarray(f(nodes), dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand is not finite on the quadrature nodes")
    return float(weights @ values)


@dataclass(frozen=True)
class OutcomeDistribution(Mapping):
    """Probabilities of labelled outcomes."""

    labels: tuple
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (len(self.labels),):
            raise ValueError("one probability per label is required")
        if np.any(probs < -OUTCOME_SUM_TOL) or abs(probs.sum() - 1.0) > OUTCOME_SUM_TOL:
            raise ValueError(f"not a probability distribution: {probs}")
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, label) -> float:
        return float(self.probs[self.labels.index(label)])

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Likelihood:
    """Outcome probabilities as a function of the parameter.

    ``func`` maps an array of parameter values of shape (n,) to an array of
    shape (n, len(outcomes)).
    """

    outcomes: tuple
    func: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    def table(self, alpha) -> np.ndarray:
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        out = np.asarray(self.func(alpha), dtype=float)
        if out.shape != (alpha.size, len(self.outcomes)):
            raise ValueError(
                f"likelihood returned shape {out.shape}, expected {(alpha.size, len(self.outcomes))}"
            )
        if np.any(out < -OUTCOME_SUM_TOL) or np.any(out > 1 + OUTCOME_SUM_TOL):
            raise ValueError("likelihood produced probabilities outside [0, 1]")
        if np.any(np.abs(out.sum(axis=1) - 1.0) > OUTCOME_SUM_TOL):
            raise ValueError("likelihood rows do not sum to one")
        return np.clip(out, 0.0, 1.0)

    def __call__(self, alpha: float) -> OutcomeDistribution:
        return OutcomeDistribution(self.outcomes, self.table(alpha)[0])

    def index(self, outcome) -> int:
        try:
            return self.outcomes.index(outcome)
        except ValueError:
            raise KeyError(f"unknown outcome {outcome!r}; expected one of {self.outcomes}") from None

    def coarse_grained(self, groups: Mapping[object, Sequence]) -> Likelihood:
        """Merge outcomes: ``groups`` maps each new label to the old labels it absorbs."""
        cols = [[self.index(o) for o in members] for members in groups.values()]
        covered = sorted(i for c in cols for i in c)
        if covered != list(range(len(self.outcomes))):
            raise ValueError("groups must partition the outcomes")
        base = self.func
        return Likelihood(
            tuple(groups), lambda a: np.stack([base(a)[:, c].sum(axis=1) for c in cols], axis=1)
        )


@dataclass(frozen=True)
class Prior:
    """Distribution over the parameter.

    Continuous: per-unit ``density`` on [lower, upper], integrated with
    ``nodes`` Gauss-Legendre points.  Discrete: ``points`` with ``weights``.
    Use the :meth:`continuous` and :meth:`discrete` constructors.
    """

    kind: str
    density: Callable[[np.ndarray], np.ndarray] | None = None
    lower: float = 0.0
    upper: float = np.pi
    nodes: int = DEFAULT_NODES
    points: np.ndarray | None = None
    weights: np.ndarray | None = None

    @classmethod
    def continuous(
        cls, density, lower: float = 0.0, upper: float = np.pi, nodes: int = DEFAULT_NODES
    ) -> Prior:
        prior = cls("continuous", density=density, lower=float(lower), upper=float(upper), nodes=int(nodes))
        total = integrate(density, lower, upper, nodes)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"prior density integrates to {total!r}, not 1")
        return prior

    @classmethod
    def discrete(cls, points: Sequence[float], weights: Sequence[float]) -> Prior:
        pts = np.asarray(points, dtype=float)
        w = np.asarray(weights, dtype=float)
        if pts.shape != w.shape or pts.ndim != 1 or pts.size == 0:
            raise ValueError("points and weights must be equal-length non-empty sequences")
        if np.any(w < 0) or abs(w.sum() - 1.0) > DISCRETE_TOL:
            raise ValueError(f"weights must be non-negative and sum to 1, got {w}")
        pts.setflags(write=False)
        w.setflags(write=False)
        return cls("discrete", points=pts, weights=w)

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Evaluation points and their integration masses (weight x density)."""
        if self.is_discrete:
            return self.points, self.weights
        nodes, w = gauss_legendre(self.lower, self.upper, self.nodes)
        return nodes, w * np.asarray(self.density(nodes), dtype=float)

    def __call__(self, alpha):
        """Density (continuous) or point mass (discrete) at ``alpha``."""
        alpha = np.asarray(alpha, dtype=float)
        if self.is_discrete:
            hits = np.isclose(alpha[..., None], self.points, rtol=0, atol=1e-12)
            return (hits * self.weights).sum(axis=-1)
        return np.asarray(self.density(alpha), dtype=float)


def outcome_marginal(prior: Prior, lik: Likelihood) -> OutcomeDistribution:
    points, mass = prior.support()
    probs = mass @ lik.table(points)
    total = probs.sum()
    if abs(total - 1.0) > OUTCOME_SUM_TOL:
        raise ArithmeticError(f"outcome marginal sums to {total!r}")
    return OutcomeDistribution(lik.outcomes, probs / total)


def _outcome_column(prior: Prior, lik: Likelihood, out) -> tuple[np.ndarray, np.ndarray, float]:
    k = lik.index(out)
    p_out = outcome_marginal(prior, lik).probs[k]
    if p_out <= ZERO_OUTCOME:
        raise ZeroDivisionError(f"outcome {out!r} has zero probability under the prior")
    points, mass = prior.support()
    return lik.table(points)[:, k], mass, float(p_out)


def posterior(prior: Prior, lik: Likelihood, out) -> Prior:
    """Bayes' rule: prior reweighted by the likelihood of ``out``."""
    k = lik.index(out)
    p_out = outcome_marginal(prior, lik).probs[k]
    if p_out <= ZERO_OUTCOME:
        raise ZeroDivisionError(f"outcome {out!r} has zero probability under the prior")
    if prior.is_discrete:
        w = prior.weights * lik.table(prior.points)[:, k] / p_out
        return Prior.discrete(prior.points, w / w.sum())
    base, func = prior.density, lik.func

    def density(a):
        a = np.asarray(a, dtype=float)
        flat = np.atleast_1d(a).ravel()
        vals = func(flat)[:, k] * np.asarray(base(flat), dtype=float) / p_out
        return vals.reshape(a.shape)

    return Prior.continuous(density, prior.lower, prior.upper, prior.nodes)


def information_gain(prior: Prior, lik: Likelihood, out) -> float:
    """KL divergence, in bits, of the posterior after ``out`` from the prior.

    Evaluated as the posterior average of log2(lik / p(out)); zero-likelihood
    points carry zero posterior mass and are dropped.
    """
    col, mass, p_out = _outcome_column(prior, lik, out)
    post_mass = mass * col / p_out
    keep = col > 0
    return float(post_mass[keep] @ np.log2(col[keep] / p_out))


def average_information_gain(prior: Prior, lik: Likelihood) -> float:
    """Outcome-averaged information gain, i.e. the mutual information in bits."""
    marg = outcome_marginal(prior, lik)
    points, mass = prior.support()
    table = lik.table(points)
    total = 0.0
    for k, p_out in enumerate(marg.probs):
        if p_out <= ZERO_OUTCOME:
            continue
        col = table[:, k]
        keep = col > 0
        total += float((mass[keep] * col[keep]) @ np.log2(col[keep] / p_out))
    return total
