"""Shared-reference-frame strategy: both parties measure their qubit along z."""

from __future__ import annotations

import numpy as np

from ..bayes import DEFAULT_NODES, Likelihood, gauss_legendre
from ..linalg import Projector, StateVector, bloch_ket, ket, prob, tensor

SRF_OUTCOMES = ("+,+", "+,-", "-,+", "-,-")
_SIGNS = np.array([(1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)


def z_projectors() -> tuple[Projector, Projector]:
    return Projector.onto(ket("+")), Projector.onto(ket("-"))


def srf_likelihood(task: str, quad_nodes: int = DEFAULT_NODES) -> Likelihood:
    """Outcome probabilities given the angle between the two spins.

    The spin pair has a uniformly random orientation in the common frame.
    For the first spin at polar angle t the second spin's z-component,
    averaged over its azimuth about the first spin, is cos(t) cos(alpha);
    the product Born rule is linear in it, so that average is exact and only
    t is integrated numerically (weight sin(t)/2).
    """
    if task not in ("I", "II"):
        raise ValueError(f"the shared-frame likelihood covers tasks I and II, not {task!r}")
    t, w = gauss_legendre(0.0, float(np.pi), quad_nodes)
    ct = np.cos(t)
    wt = 0.5 * np.sin(t) * w

    def func(alpha: np.ndarray) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        if task == "II" and not np.all(np.isclose(alpha, 0.0) | np.isclose(alpha, np.pi)):
            raise ValueError("task II pairs are parallel (0) or anti-parallel (pi)")
        if np.any(alpha < -1e-12) or np.any(alpha > np.pi + 1e-12):
            raise ValueError("angle outside [0, pi]")
        ca = np.cos(alpha)
        out = np.empty((alpha.size, 4))
        for k, (a, b) in enumerate(_SIGNS):
            first = 1 + a * ct  # (n_t,)
            second = 1 + b * np.outer(ca, ct)  # (n_alpha, n_t)
            out[:, k] = (second * first) @ wt / 4
        return out

    return Likelihood(SRF_OUTCOMES, func)


def srf_pair_table(theta: float, phi: float = 0.0) -> np.ndarray:
    """Task II outcome probabilities for a pair along direction m.

    Returns shape (4, 2): rows follow ``SRF_OUTCOMES``, columns are the
    parallel pair |m, m> and the anti-parallel pair |m, -m>.
    """
    up = bloch_ket(theta, phi)
    down = bloch_ket(np.pi - theta, phi + np.pi)
    pz = z_projectors()
    out = np.empty((4, 2))
    for col, second in enumerate((up, down)):
        state = tensor(up, second)
        for row, (a, b) in enumerate(_SIGNS.astype(int)):
            out[row, col] = prob(state, [pz[(1 - a) // 2], pz[(1 - b) // 2]])
    return out


def srf_sent_table(state: StateVector) -> np.ndarray:
    """Probabilities of the four z-basis outcome pairs for a two-qubit state."""
    pz = z_projectors()
    return np.array([prob(state, [pz[(1 - a) // 2], pz[(1 - b) // 2]]) for a, b in _SIGNS.astype(int)])
