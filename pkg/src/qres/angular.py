"""Spin-j operators, j x 1/2 coupling, spin-j singlets and total-spin projectors.

Spin labels are stored as twice their value so half-integers stay exact.
Single-spin bases are ordered m = j, j-1, ..., -j.  Pair spaces put the
spin-1/2 factor first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from .linalg import Operator, Projector, StateVector, ket, permute

EIGEN_GROUP_TOL = 1e-8


@dataclass(frozen=True, order=True)
class SpinJ:
    twice_j: int

    def __post_init__(self) -> None:
        if not isinstance(self.twice_j, (int, np.integer)) or self.twice_j < 0:
            raise ValueError(f"twice_j must be a non-negative integer, got {self.twice_j!r}")
        object.__setattr__(self, "twice_j", int(self.twice_j))

    @classmethod
    def parse(cls, value) -> SpinJ:
        """Accept ``"1/2"``, ``"0.5"``, ``3``, ``Fraction(3, 2)`` and the like.

        Raises ValueError unless the value is an exact multiple of 1/2.
        """
        try:
            frac = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse spin label {value!r}") from exc
        twice = 2 * frac
        if twice.denominator != 1 or twice < 0:
            raise ValueError(f"spin must be a non-negative multiple of 1/2, got {value!r}")
        return cls(int(twice))

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    def __float__(self) -> float:
        return self.twice_j / 2

    def __str__(self) -> str:
        return str(self.j)


HALF = SpinJ(1)


def _label(twice: int) -> str:
    return str(Fraction(twice, 2))


@lru_cache(maxsize=None)
def spin_operators(j: SpinJ) -> tuple[Operator, Operator, Operator]:
    """(Jx, Jy, Jz) in units of hbar."""
    jj = float(j)
    m = jj - np.arange(j.dim)
    jp = np.zeros((j.dim, j.dim))
    for i in range(1, j.dim):
        jp[i - 1, i] = np.sqrt(jj * (jj + 1) - m[i] * (m[i] + 1))
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    return Operator(jx), Operator(jy), Operator(np.diag(m))


def rotation(j: SpinJ, theta: float, axis) -> Operator:
    """exp(-i theta n.J) for unit axis ``n``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    gen = sum(c * op.matrix for c, op in zip(n, spin_operators(j)))
    w, v = np.linalg.eigh(gen)
    return Operator((v * np.exp(-1j * theta * w)) @ v.conj().T)


def cg_half(
    j: SpinJ,
    twice_m_total: int,
    branch: Literal["plus", "minus"],
    spin_component: Literal["up", "down"],
) -> float:
    """Coupling coefficient between |j, m -+ 1/2>|+-1/2> and |j +- 1/2, m>.

    ``spin_component="up"`` gives <j, m-1/2; + | j+-1/2, m>, ``"down"`` gives
    <j, m+1/2; - | j+-1/2, m>, where ``branch`` picks the sign of the total.
    The magnetic number ``m`` is passed doubled.
    """
    if branch not in ("plus", "minus") or spin_component not in ("up", "down"):
        raise ValueError(f"bad branch/spin_component: {branch!r}, {spin_component!r}")
    twice_total = j.twice_j + 1 if branch == "plus" else j.twice_j - 1
    if twice_total < 0 or abs(twice_m_total) > twice_total or (twice_m_total - twice_total) % 2:
        raise ValueError(
            f"m_total={_label(twice_m_total)} is out of range for J={_label(twice_total)}"
        )
    x = twice_m_total / (j.twice_j + 1)
    if branch == "plus":
        return float(np.sqrt(0.5 * (1 + x)) if spin_component == "up" else np.sqrt(0.5 * (1 - x)))
    return float(-np.sqrt(0.5 * (1 - x)) if spin_component == "up" else np.sqrt(0.5 * (1 + x)))


@dataclass(frozen=True)
class CoupledBasis:
    """Total-spin eigenbasis of spin-1/2 x spin-j.

    ``vectors`` maps (twice_J, twice_M) to the coupled state.
    """

    j: SpinJ
    vectors: dict

    def multiplet(self, twice_total: int) -> list[StateVector]:
        return [v for (tj, _), v in sorted(self.vectors.items(), reverse=True) if tj == twice_total]


@lru_cache(maxsize=None)
def coupled_basis(j: SpinJ) -> CoupledBasis:
    d = j.dim
    dims = (2, d)
    vectors = {}
    for branch, twice_total in (("plus", j.twice_j + 1), ("minus", j.twice_j - 1)):
        if twice_total < 0:
            continue
        for twice_m in range(twice_total, -twice_total - 1, -2):
            amps = np.zeros(2 * d)
            # |+>|j, m - 1/2>: spin index 0, spin-j index for twice value twice_m - 1
            for spin_index, shift, comp in ((0, -1, "up"), (1, +1, "down")):
                twice_mj = twice_m + shift
                if abs(twice_mj) <= j.twice_j:
                    idx = (j.twice_j - twice_mj) // 2
                    amps[spin_index * d + idx] = cg_half(j, twice_m, branch, comp)
            vectors[(twice_total, twice_m)] = StateVector(amps, dims)
    return CoupledBasis(j, vectors)


@lru_cache(maxsize=None)
def singlet(j: SpinJ) -> StateVector:
    """Total-spin-zero state of two spin-j particles, phase (-1)^(j-m)."""
    d = j.dim
    amps = np.zeros((d, d))
    for i in range(d):
        amps[i, d - 1 - i] = (-1) ** i
    return StateVector(amps.ravel() / np.sqrt(d), (d, d))


@lru_cache(maxsize=None)
def qubit_spin_states() -> dict[str, StateVector]:
    """Singlet s0 and triplet t1, t0, t-1 of two qubits."""
    r = 1 / np.sqrt(2)
    pm, mp = ket("+", "-").amplitudes, ket("-", "+").amplitudes
    return {
        "s0": StateVector(r * (pm - mp), (2, 2)),
        "t1": ket("+", "+"),
        "t0": StateVector(r * (pm + mp), (2, 2)),
        "t-1": ket("-", "-"),
    }


@lru_cache(maxsize=None)
def total_spin_projectors_qubits() -> tuple[Projector, Projector]:
    """(Pi0, Pi1): total spin 0 and 1 of a qubit pair."""
    states = qubit_spin_states()
    pi0 = Projector.onto(states["s0"])
    pi1 = Projector.onto(states["t1"], states["t0"], states["t-1"])
    return pi0, pi1


@lru_cache(maxsize=None)
def total_spin_projectors_pair(j: SpinJ) -> tuple[Projector, Projector]:
    """(Pi_{j-1/2}, Pi_{j+1/2}) on spin-1/2 x spin-j, built from coupled_basis."""
    basis = coupled_basis(j)
    dims = (2, j.dim)
    out = []
    for twice_total in (j.twice_j - 1, j.twice_j + 1):
        states = basis.multiplet(twice_total)
        out.append(Projector.onto(*states) if states else Projector(np.zeros((2 * j.dim,) * 2), dims))
    return out[0], out[1]


def total_spin_squared(j: SpinJ) -> Operator:
    s = spin_operators(HALF)
    t = spin_operators(j)
    eye_s, eye_t = np.eye(2), np.eye(j.dim)
    comps = [np.kron(a.matrix, eye_t) + np.kron(eye_s, b.matrix) for a, b in zip(s, t)]
    return Operator(sum(c @ c for c in comps), (2, j.dim))


def oracle_projectors(j: SpinJ) -> tuple[Projector, Projector]:
    """Independent (Pi_{j-1/2}, Pi_{j+1/2}) by diagonalizing total J^2."""
    w, v = np.linalg.eigh(total_spin_squared(j).matrix)
    jj = float(j)
    lo, hi = (jj - 0.5) * (jj + 0.5), (jj + 0.5) * (jj + 1.5)
    in_lo = np.abs(w - lo) < EIGEN_GROUP_TOL
    in_hi = np.abs(w - hi) < EIGEN_GROUP_TOL
    stray = ~(in_lo | in_hi)
    if jj == 0:
        # J = -1/2 does not exist; its "eigenvalue" 0 cannot occur
        in_lo[:] = False
        stray = ~in_hi
    if stray.any():
        raise ArithmeticError(f"J^2 eigenvalues {w[stray]} match neither allowed total spin")
    dims = (2, j.dim)
    return tuple(
        Projector(v[:, mask] @ v[:, mask].conj().T, dims) for mask in (in_lo, in_hi)
    )


def swap_pair(op: Operator) -> Operator:
    """Same operator with its two tensor factors exchanged."""
    return permute(op, (1, 0))

