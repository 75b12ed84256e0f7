"""Task III: telling a singlet |psi-> from a parallel pair |m, m>.

The sent pair occupies qubits (1, 2).  A shared two-qubit resource (singlet
or refbit) occupies (B, C).  Bob measures (B, 1) and Charlie (2, C); with a
shared frame each measures only the received qubit along z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..angular import HALF, singlet, total_spin_projectors_qubits
from ..bayes import DEFAULT_NODES
from ..linalg import (
    Operator,
    Projector,
    StateVector,
    apply,
    bloch_angles,
    bloch_ket,
    ket,
    permute,
    prob,
    tensor,
)
from .common import (
    Discrimination,
    Resource,
    TaskResult,
    as_table,
    batched_conclusive,
    conclusive_probability,
    sphere_grid,
)
from .estimation import QUBIT_PAIR_OUTCOMES
from .srf import SRF_OUTCOMES, z_projectors

TASK3_HYPOTHESES = ("psi-", "m,m")
POVM_OUTCOMES = ("E0,E0", "E0,E1", "E1,E0", "E1,E1")
# azimuthal points; probabilities are trigonometric polynomials of degree <= 4 in phi
PHI_NODES = 16

# (B, C, 1, 2) -> (B, 1, 2, C)
_TO_PARTY_ORDER = (0, 2, 3, 1)


def _shared_state(resource: Resource, refbit: StateVector | None) -> StateVector | None:
    if resource.kind == "srf":
        return None
    if resource.kind == "sss":
        if resource.spin != HALF:
            raise ValueError("task III is defined for a spin-1/2 singlet only")
        return singlet(HALF)
    return ket("+", "+") if refbit is None else refbit


def _party_ops(resource: Resource, weights: np.ndarray | None = None) -> list[tuple[Operator, Operator]]:
    """Local measurement operators per joint outcome, in outcome order."""
    if resource.kind == "srf":
        pz = z_projectors()
        return [(a, b) for a in pz for b in pz]
    pis = total_spin_projectors_qubits()
    if weights is None:
        local = list(pis)
    else:
        local = [Operator(w[0] * pis[0].matrix + w[1] * pis[1].matrix, (2, 2)) for w in weights]
    return [(a, b) for a in local for b in local]


def task3_outcomes(resource: Resource) -> tuple[str, ...]:
    return SRF_OUTCOMES if resource.kind == "srf" else QUBIT_PAIR_OUTCOMES


def mm_state(theta: float, phi: float = 0.0) -> StateVector:
    m = bloch_ket(theta, phi)
    return tensor(m, m)


def _outcome_probs(resource, sent: StateVector, refbit, weights=None) -> np.ndarray:
    shared = _shared_state(resource, refbit)
    ops = _party_ops(resource, weights)
    if shared is None:
        return np.array([prob(sent, [a, b]) for a, b in ops])
    total = permute(tensor(shared, sent), _TO_PARTY_ORDER)
    return np.array([prob(total, [a, b]) for a, b in ops])


def task3_conditional(
    resource: Resource, theta: float, phi: float = 0.0, refbit: StateVector | None = None
) -> np.ndarray:
    """Conditional outcome table, shape (4, 2), for direction m = (theta, phi).

    Columns follow ``TASK3_HYPOTHESES``.  Evaluated on the full state.
    """
    return np.stack(
        [
            _outcome_probs(resource, singlet(HALF), refbit),
            _outcome_probs(resource, mm_state(theta, phi), refbit),
        ],
        axis=1,
    )


def effective_povm(
    resource: Resource, refbit: StateVector | None = None, weights: np.ndarray | None = None
) -> np.ndarray:
    """Operators on the sent pair reproducing each joint outcome's probability.

    Returns shape (4, 4, 4): element [o] satisfies
    P(o | sent) = <sent| M[o] |sent> for every two-qubit ``sent``.
    """
    shared = _shared_state(resource, refbit)
    ops = _party_ops(resource, weights)
    basis = [StateVector.basis(i, (2, 2)) for i in range(4)]
    if shared is None:
        return np.stack([np.kron(a.matrix, b.matrix) for a, b in ops])
    lifted = [permute(tensor(shared, e), _TO_PARTY_ORDER) for e in basis]
    out = np.empty((len(ops), 4, 4), dtype=complex)
    for k, (a, b) in enumerate(ops):
        images = [apply([a, b], v) for v in lifted]
        for r, vr in enumerate(lifted):
            for c in range(4):
                out[k, r, c] = np.vdot(vr.amplitudes, images[c])
    return out


def _mm_amplitudes(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    single = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=1)
    return np.einsum("ni,nj->nij", single, single).reshape(-1, 4)


def task3_tables(
    resource: Resource,
    quad_nodes: int = DEFAULT_NODES,
    refbit: StateVector | None = None,
    phi_nodes: int | None = None,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Conditional tables over a sphere grid, shape (n, 4, 2), and grid weights.

    Resources aligned with z need only the polar grid; a refbit along any
    other axis is averaged over the azimuth as well.
    """
    if phi_nodes is None:
        phi_nodes = PHI_NODES if refbit is not None else 1
    theta, phi, w = sphere_grid(quad_nodes, phi_nodes)
    m = effective_povm(resource, refbit, weights)
    psi = singlet(HALF).amplitudes
    p_psi = np.einsum("i,oij,j->o", psi.conj(), m, psi).real
    v = _mm_amplitudes(theta, phi)
    p_mm = np.einsum("ni,oij,nj->no", v.conj(), m, v).real
    tables = np.stack([np.broadcast_to(p_psi, p_mm.shape), p_mm], axis=2)
    return tables, w


def task3_discrimination(resource: Resource, quad_nodes: int = DEFAULT_NODES, **kw) -> Discrimination:
    tables, w = task3_tables(resource, quad_nodes, **kw)
    return conclusive_probability(tables, w)


def task3_outcome_table(
    resource: Resource, quad_nodes: int = DEFAULT_NODES, refbit: StateVector | None = None
) -> TaskResult:
    """Sphere-averaged outcome table with the conclusive probability.

    Use :func:`task3_conditional` for the table at a fixed direction.
    """
    disc = task3_discrimination(resource, quad_nodes, refbit=refbit)
    return TaskResult(
        "III",
        resource,
        "conclusive_prob",
        disc.conclusive,
        parameter=float(resource.spin) if resource.kind == "sss" else None,
        outcome_table=as_table(task3_outcomes(resource), TASK3_HYPOTHESES, disc.average_table),
        extras={f"conclusive_given_{h}": float(p) for h, p in zip(TASK3_HYPOTHESES, disc.per_hypothesis)},
    )


def task3_conclusive(
    resource: Resource, quad_nodes: int = DEFAULT_NODES, refbit: StateVector | None = None
) -> TaskResult:
    return task3_outcome_table(resource, quad_nodes, refbit)


# --- rotationally invariant two-outcome measurements with a refbit ----------

@dataclass(frozen=True)
class RefbitPovm:
    """E0 = alpha Pi0 + beta Pi1, E1 = (1 - alpha) Pi0 + (1 - beta) Pi1."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def weights(self) -> np.ndarray:
        """Row k holds the (Pi0, Pi1) weights of element E_k."""
        return np.array([[self.alpha, self.beta], [1 - self.alpha, 1 - self.beta]])

    def elements(self) -> tuple[Operator, Operator]:
        pi0, pi1 = total_spin_projectors_qubits()
        return tuple(Operator(w[0] * pi0.matrix + w[1] * pi1.matrix, (2, 2)) for w in self.weights)


def refbit_singlet_closed_form(povm: RefbitPovm) -> np.ndarray:
    """P(E_i, E_j | psi-) with a z-refbit, outcome order ``POVM_OUTCOMES``."""
    a, b = povm.alpha, povm.beta
    mixed = 0.5 * b * (1 - b) + 0.25 * b * (1 - a) + 0.25 * a * (1 - b)
    return np.array([0.5 * a * b + 0.5 * b**2, mixed, mixed, 0.5 * (1 - b) * (1 - a) + 0.5 * (1 - b) ** 2])


def refbit_likelihood(povm: RefbitPovm, theta: float, phi: float = 0.0,
                      refbit: StateVector | None = None) -> np.ndarray:
    """Table (4, 2) of P(E_i, E_j | state) for |psi-> and |m, m>, on the full state."""
    return np.stack(
        [
            _outcome_probs(Resource.refbit(), singlet(HALF), refbit, povm.weights),
            _outcome_probs(Resource.refbit(), mm_state(theta, phi), refbit, povm.weights),
        ],
        axis=1,
    )


@dataclass(frozen=True)
class RefbitOptimum:
    alpha: float
    beta: float
    conclusive: float
    grid: np.ndarray  # (grid_n, grid_n) conclusive probability, indexed [beta, alpha]


def optimize_refbit_measurement(grid_n: int = 101, quad_nodes: int = DEFAULT_NODES) -> RefbitOptimum:
    """Exhaustive search of the conclusive probability over (alpha, beta) in [0, 1]^2.

    Ties go to the smallest beta, then the smallest alpha.
    """
    if grid_n < 11:
        raise ValueError(f"grid_n must be at least 11, got {grid_n}")
    values = np.linspace(0.0, 1.0, grid_n)
    # conditional tables of the total-spin outcomes, shape (n, 2, 2, 2): [orient, bob, charlie, hyp]
    base, w = task3_tables(Resource.refbit(), quad_nodes)
    base = base.reshape(-1, 2, 2, 2)
    grid = np.empty((grid_n, grid_n))
    for bi, beta in enumerate(values):
        weights = np.stack([np.stack([values, np.full(grid_n, beta)], axis=1),
                            np.stack([1 - values, np.full(grid_n, 1 - beta)], axis=1)], axis=1)
        # weights: (n_alpha, outcome, projector)
        tables = np.einsum("aik,ajl,nklh->anijh", weights, weights, base, optimize=True).reshape(grid_n, -1, 4, 2)
        grid[bi] = batched_conclusive(tables, w)
    best = grid.max()
    # row-major argmax over [beta, alpha] breaks ties toward small beta, then small alpha
    bi, ai = np.unravel_index(np.argmax(grid >= best - 1e-12), grid.shape)
    return RefbitOptimum(float(values[ai]), float(values[bi]), float(grid[bi, ai]), grid)


# --- turning a shared singlet into a refbit ---------------------------------

def convert_sss_to_refbit(n, seed: int) -> tuple[StateVector, str]:
    """Bob measures his half of a singlet along ``n`` and flips his qubit.

    The singlet collapses to an anti-parallel pair along n; Bob knows n, so
    he can apply the NOT along n that leaves a parallel pair along -n (outcome
    "up") or +n (outcome "down").  Returns the (B, C) state and the outcome.
    """
    theta, phi = bloch_angles(n)
    up = bloch_ket(theta, phi)
    down = bloch_ket(np.pi - theta, phi + np.pi)
    p_up = Projector.onto(up)
    p_down = Projector.onto(down)
    eye = Operator.identity((2,))
    shared = singlet(HALF)
    rng = np.random.default_rng(seed)
    outcome = "up" if rng.random() < prob(shared, [p_up, eye]) else "down"
    collapsed = StateVector.normalized(apply([p_up if outcome == "up" else p_down, eye], shared), (2, 2))
    flip = Operator(
        np.outer(down.amplitudes, up.amplitudes.conj()) + np.outer(up.amplitudes, down.amplitudes.conj())
    )
    return StateVector.normalized(apply([flip, eye], collapsed), (2, 2)), outcome
